//! Homoclinic bifurcations of the saddle: the fate of `W^u`, the split
//! function `Delta_k`, root finding for the bifurcation surfaces, and twist
//! counting along trajectories.

mod fate;
mod split;
mod symbolic;

use serde::{Deserialize, Serialize};

use crate::model::State;

pub use fate::classify_wu_fate;
pub use split::{
    find_alpha_k, find_lambda0, find_lambda_k, split_function, split_function_k, split_side,
    BifurcationPoint, Orientation, SplitResult, SplitSide,
};
pub use symbolic::{symbolic_sequence, winding_half_turns, write_symbols_csv, Symbol, SymbolSide};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FateKind {
    SectionHit,
    ConvergedToFocusPlus,
    ConvergedToFocusMinus,
    Diverged,
    Undecided,
}

/// Outcome of following `W^u`, with the time and place that decided it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FateLabel {
    pub kind: FateKind,
    pub t: f64,
    pub state: State,
}

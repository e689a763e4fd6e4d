//! The Weil-Deligne data model: words, matrix data and its validation, `Sp_t`
//! blocks and structured sums, Frobenius semisimplification, the monodromy
//! filtration and Euler factors.

mod filtration;
mod rep;
mod structured;
mod word;

pub use filtration::{monodromy_filtration, MonodromyFiltration};
pub use rep::{averaging_projector, spanning_words, Check, Diagnostics, FamilyWD, MatrixWD, WdRep};
pub use structured::{
    sp_to_matrix, unramified_block, FamilyBlock, FamilyTwist, GroundBlock, IrredRep, SpBlock, StructuredFamilyWD,
    StructuredRep, StructuredWD, Twist,
};
pub use word::{Letter, WeilWord};

#[cfg(test)]
mod tests;

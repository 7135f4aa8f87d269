//! Finite-window verdicts for asymptotic properties, Croft sequence tests and
//! empirical theorem checks.

mod au;
mod croft;
mod hl;
mod tail;
mod theorem;
mod verdict;

pub(crate) use au::{au_search, AuSearch};
pub use au::{delta_ladder, detect_au, detect_uc, TAIL_QUANTILES};
pub use croft::{croft_test, golden_t_values, CroftReport, CroftSequence, GOLDEN_RANGE};
pub use hl::hl_ratio_profile;
pub use tail::{detect_limit, detect_vanishing};
pub use theorem::{
    check_theorem, check_theorem_with, derivative_channel, Channels, Claim, Implication, TheoremCase, TheoremOptions,
    TheoremReport,
};
pub use verdict::{Certificate, Property, Status, Verdict, Witness};

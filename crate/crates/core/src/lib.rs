//! Intersecting families of r-matchings in K_{2n}.
//!
//! Builds rooted Baranyai orders and their cyclic edge orders from
//! permutations, counts compatible permutations in closed form and by
//! brute force, searches exactly for maximum intersecting families, and
//! checks the permutation lemmas and Kneser-graph corollaries that the
//! cycle-method argument rests on.
//!
//! With the default `parallel` feature, sweeps over the symmetric group and
//! the clique search run on rayon; without it everything runs on the
//! calling thread with identical results.

pub mod baranyai;
pub mod clique;
pub mod count;
pub mod ekr;
pub mod error;
pub mod katona;
pub mod kneser;
pub mod matching;
pub mod par;
pub mod perm;
pub mod transposition;

pub use baranyai::{baranyai_edge, cyclic_order, rooted_order, shift, verify_goodness, CyclicOrder, Interval, RootedOrder};
pub use count::{chi, phi};
pub use ekr::{is_star, kneser_complement_bridge, max_intersecting, verify_theorem, EkrReport, SearchBudget, SearchStatus};
pub use error::{Error, Result};
pub use katona::{is_compatible, q_bruteforce, q_formula, trace, verify_double_count, CompatibilityCount, TraceResult};
pub use kneser::{ham_power_certificate, verify_ham_power, HamPowerCertificate, KneserGraph};
pub use matching::{enumerate_matchings, intersects, star_family, Edge, Matching, MatchingFamily, Params};
pub use par::{Execution, DEFAULT_PERM_LIMIT};
pub use perm::Permutation;
pub use transposition::{
    center_map, composition_identity, construct_interval_permutation, reflect_swap, transpose_adjacent, CenterMap,
    CenterMapReport,
};

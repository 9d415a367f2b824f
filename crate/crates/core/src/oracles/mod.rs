//! Brute-force references the constructions are checked against.

mod md;
mod nerode;
mod pratt;
mod squares;

pub use md::{md_reference, MdSnapshot, MdState};
pub use nerode::{nerode_lower_bound, NerodeReport};
pub use pratt::{
    factorize, mod_pow, pratt_generate, pratt_node_count, pratt_node_ok, pratt_verify, pratt_verify_budgeted,
    trial_division_is_prime, PrattCertificate, PrattError,
};
pub use squares::{is_perfect_square, isqrt, square_language_member};

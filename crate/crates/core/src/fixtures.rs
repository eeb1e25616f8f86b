//! Two small reference systems used throughout the tests and documentation.
//!
//! `small_system`:
//!
//! ```text
//! x1'  = f1
//! x1'  = x2 + f2
//! 0    = x1 + x2 + x3(t - tau) + f3
//! ```
//!
//! `coupled_system`:
//!
//! ```text
//! x1' = x2 + x3
//! x2' = x3 + x2(t - tau)
//! x3' = x2 + x3(t - tau)
//! 0   = x1 + x2 + x3 + x4(t - tau)
//! ```

use crate::ddae::{parse_ddae, DdaeStructure};

pub const SMALL_SYSTEM_JSON: &str = include_str!("../data/small_delay_system.json");
pub const COUPLED_SYSTEM_JSON: &str = include_str!("../data/coupled_delay_system.json");

pub fn small_system() -> DdaeStructure {
    parse_ddae(SMALL_SYSTEM_JSON).expect("bundled fixture is valid")
}

pub fn coupled_system() -> DdaeStructure {
    parse_ddae(COUPLED_SYSTEM_JSON).expect("bundled fixture is valid")
}

//! Engine for a mediator-run marketplace.
//!
//! A trusted mediator holds every participant's account and every item.
//! Sellers list items at a price, buyers purchase them, and the mediator
//! moves the item and the money in one atomic step. The whole state lives
//! in immutable cons lists, every operation is a pure function from market
//! to market, and the structural properties the design leans on (updating
//! a list never changes its length, an accumulator only shifts a count,
//! money is conserved by trades) are enforced as executable property
//! suites rather than taken on faith.
//!
//! The crate splits into:
//!
//! - [`nat`] — natural-number arithmetic with truncated subtraction and
//!   checked overflow,
//! - [`list`] — the immutable list kernel with constant-stack operations
//!   and their structurally recursive reference definitions,
//! - [`market`] — the mediator state machine (`deposit`, `assign`,
//!   `price`, `sell`) and script replay,
//! - [`script`] — the YAML script format: two-layer parsing and canonical
//!   serialization,
//! - [`instance`] — the deterministic workload generator for the
//!   throughput experiments.

pub mod instance;
pub mod list;
pub mod market;
pub mod nat;
pub mod script;

pub use instance::{generate, GenParams, Lcg};
pub use list::ConsList;
pub use market::{
    apply_operation, assign, deposit, is_advertised, price, run_script, sell, total_money,
    Failure, Item, Market, MarketError, Money, Replay, ReplayMode,
};
pub use nat::{monus, monus1, succ, Nat};
pub use script::{parse_script, serialize_script, Operation, ParseError, ScriptDocument};

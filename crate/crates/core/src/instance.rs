//! Deterministic synthetic-instance generator for the throughput experiment.
//!
//! An instance is a script in three phases: open one funded account per
//! user, declare and advertise every item, then run the requested number of
//! purchases, re-advertising the sold item after each one (a sale takes the
//! ad down, so without the re-listing every item could be bought at most
//! once).
//!
//! Everything is drawn from a fixed linear congruential generator so that
//! equal parameters produce byte-identical scripts on any machine.

use crate::market::Money;
use crate::nat::{self, Nat};
use crate::script::{Operation, ScriptDocument};

/// Instance shape: account count, item count, purchase count, and the
/// random seed. `users` and `items` must both be at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenParams {
    pub users: Nat,
    pub items: Nat,
    pub transactions: Nat,
    pub seed: u64,
}

/// Every generated deposit is this many currency units per requested
/// transaction: even a single buyer paying the maximum price every time
/// cannot run out of money.
pub const DEPOSIT_PER_TRANSACTION: Money = 100;

/// Generated prices are drawn uniformly from `1..=MAX_PRICE`; never zero,
/// so every generated listing is advertised.
pub const MAX_PRICE: Money = 100;

/// Linear congruential generator with fixed constants, so the stream is
/// reproducible across implementations. Each step yields the top 31 bits
/// of the 64-bit state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    const MULTIPLIER: u64 = 6364136223846793005;
    const INCREMENT: u64 = 1442695040888963407;

    pub fn new(seed: u64) -> Self {
        Lcg { state: seed }
    }

    /// Advance the state and return the next value, always below 2^31.
    pub fn next_value(&mut self) -> Nat {
        self.state = self
            .state
            .wrapping_mul(Self::MULTIPLIER)
            .wrapping_add(Self::INCREMENT);
        self.state >> 33
    }
}

/// Build the instance script for `params`.
///
/// Draw order is fixed: one price draw per item in phase two, then an item
/// draw, a buyer draw, and a price draw per transaction in phase three.
/// Panics if `params` violates `users >= 1, items >= 1`.
pub fn generate(params: &GenParams) -> ScriptDocument {
    assert!(
        params.users >= 1 && params.items >= 1,
        "instance parameters need at least one user and one item"
    );

    fn draw_price(rng: &mut Lcg) -> Money {
        1 + rng.next_value() % MAX_PRICE
    }

    let mut rng = Lcg::new(params.seed);
    let op_count = params.users + 2 * params.items + 2 * params.transactions;
    let mut operations = Vec::with_capacity(op_count as usize);

    let funding = nat::mul(DEPOSIT_PER_TRANSACTION, params.transactions);
    for user in 0..params.users {
        operations.push(Operation::Deposit { user, amount: funding });
    }

    // Round-robin ownership keeps the user-to-item ratio uniform.
    for item in 0..params.items {
        operations.push(Operation::Assign { item, user: item % params.users });
        operations.push(Operation::Price { item, amount: draw_price(&mut rng) });
    }

    for _ in 0..params.transactions {
        let item = rng.next_value() % params.items;
        let buyer = rng.next_value() % params.users;
        operations.push(Operation::Sell { item, buyer });
        operations.push(Operation::Price { item, amount: draw_price(&mut rng) });
    }

    ScriptDocument::new(operations)
}

//! The mediator's state machine.
//!
//! A [`Market`] holds every participant's account balance and every item,
//! both as immutable lists. Agents are identified by the position of their
//! account, items by their position in the item list. All four protocol
//! operations are pure: they leave the input market untouched and return a
//! fresh market value (or an error, in which case there is no new state at
//! all).
//!
//! Positional updates go through [`ConsList::set`], whose length
//! preservation is what guarantees that no account or item is ever created
//! or destroyed by a state change; accounts and items only come into being
//! through the explicit upsert-append cases of [`deposit`] and [`assign`].

use thiserror::Error;

use crate::list::ConsList;
use crate::nat::{self, Nat};
use crate::script::Operation;

/// Currency amount. Non-negative by construction: balances cannot go into
/// debt, and a purchase needs the full price up front.
pub type Money = Nat;

/// A tradable good: who owns it and what it currently sells for.
///
/// An item is advertised exactly when its price is positive; price 0 means
/// it is not for sale.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Item {
    pub owner: Nat,
    pub price: Money,
}

/// Entire state held by the mediator: one balance per user, one entry per
/// item.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Market {
    pub accounts: ConsList<Money>,
    pub items: ConsList<Item>,
}

impl Market {
    pub fn empty() -> Self {
        Market::default()
    }
}

/// Why an operation was rejected. A rejected operation has no effect.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum MarketError {
    /// `deposit` may extend the account list only at the next free index.
    #[error("user {user} skips past the next free account index {next_free}")]
    UserIndexGap { user: Nat, next_free: Nat },
    /// `assign` may extend the item list only at the next free index.
    #[error("item {item} skips past the next free item index {next_free}")]
    ItemIndexGap { item: Nat, next_free: Nat },
    #[error("no account exists for user {user}")]
    UnknownUser { user: Nat },
    #[error("no item exists at index {item}")]
    UnknownItem { item: Nat },
    #[error("item {item} is not advertised")]
    NotAdvertised { item: Nat },
    #[error("user {buyer} holds {balance} which does not cover the price {price}")]
    InsufficientFunds { buyer: Nat, balance: Money, price: Money },
}

impl MarketError {
    /// Stable one-word tag, used by the report format.
    pub fn kind(&self) -> &'static str {
        match self {
            MarketError::UserIndexGap { .. } => "UserIndexGap",
            MarketError::ItemIndexGap { .. } => "ItemIndexGap",
            MarketError::UnknownUser { .. } => "UnknownUser",
            MarketError::UnknownItem { .. } => "UnknownItem",
            MarketError::NotAdvertised { .. } => "NotAdvertised",
            MarketError::InsufficientFunds { .. } => "InsufficientFunds",
        }
    }
}

/// Declare a user and/or credit their account.
///
/// Upsert semantics: an existing account (`user < number of accounts`) is
/// credited with `amount`; `user` equal to the number of accounts opens a
/// new account holding `amount`. Anything beyond that leaves a gap in the
/// position-is-identity scheme and is rejected.
pub fn deposit(market: &Market, user: Nat, amount: Money) -> Result<Market, MarketError> {
    match market.accounts.get(user) {
        Some(&balance) => Ok(Market {
            accounts: market.accounts.set(user, nat::add(balance, amount)),
            items: market.items.clone(),
        }),
        None => match market.accounts.append_if_next(user, amount) {
            Ok(accounts) => Ok(Market { accounts, items: market.items.clone() }),
            Err(next_free) => Err(MarketError::UserIndexGap { user, next_free }),
        },
    }
}

/// Declare an item and/or hand it to `user`.
///
/// Upsert semantics mirror [`deposit`]: an existing item is replaced, the
/// next free index appends. Either way the item starts unadvertised
/// (price 0); putting it up for sale is a separate [`price`] step.
pub fn assign(market: &Market, item: Nat, user: Nat) -> Result<Market, MarketError> {
    if market.accounts.get(user).is_none() {
        return Err(MarketError::UnknownUser { user });
    }
    let fresh = Item { owner: user, price: 0 };
    if market.items.get(item).is_some() {
        Ok(Market {
            accounts: market.accounts.clone(),
            items: market.items.set(item, fresh),
        })
    } else {
        match market.items.append_if_next(item, fresh) {
            Ok(items) => Ok(Market { accounts: market.accounts.clone(), items }),
            Err(next_free) => Err(MarketError::ItemIndexGap { item, next_free }),
        }
    }
}

/// Advertise an item at `amount`, or hide it when `amount` is 0.
pub fn price(market: &Market, item: Nat, amount: Money) -> Result<Market, MarketError> {
    match market.items.get(item) {
        None => Err(MarketError::UnknownItem { item }),
        Some(&current) => Ok(Market {
            accounts: market.accounts.clone(),
            items: market.items.set(
                item,
                Item {
                    owner: current.owner,
                    price: amount,
                },
            ),
        }),
    }
}

/// Transfer an advertised item to `buyer` and its price to the seller.
///
/// The three updates — debit the buyer, credit the seller, hand over the
/// item — happen together or not at all. The item comes out of the sale
/// not-for-sale (price 0), so the new owner controls any re-listing. A user
/// may buy their own item; the money movement then nets to zero but the ad
/// still comes down.
pub fn sell(market: &Market, item: Nat, buyer: Nat) -> Result<Market, MarketError> {
    let listing = match market.items.get(item) {
        Some(&listing) => listing,
        None => return Err(MarketError::UnknownItem { item }),
    };
    let buyer_balance = match market.accounts.get(buyer) {
        Some(&balance) => balance,
        None => return Err(MarketError::UnknownUser { user: buyer }),
    };
    if listing.price == 0 {
        return Err(MarketError::NotAdvertised { item });
    }
    if buyer_balance < listing.price {
        return Err(MarketError::InsufficientFunds {
            buyer,
            balance: buyer_balance,
            price: listing.price,
        });
    }

    let debited = market.accounts.set(buyer, nat::monus(buyer_balance, listing.price));
    // The seller's balance is read after the debit so a self-purchase nets
    // to zero instead of minting money.
    let seller_balance = match debited.get(listing.owner) {
        Some(&balance) => balance,
        None => return Err(MarketError::UnknownUser { user: listing.owner }),
    };
    let accounts = debited.set(listing.owner, nat::add(seller_balance, listing.price));
    let items = market.items.set(
        item,
        Item {
            owner: buyer,
            price: 0,
        },
    );
    Ok(Market { accounts, items })
}

/// Whether the item is currently up for sale.
pub fn is_advertised(market: &Market, item: Nat) -> Result<bool, MarketError> {
    match market.items.get(item) {
        None => Err(MarketError::UnknownItem { item }),
        Some(listing) => Ok(listing.price > 0),
    }
}

/// Sum of all account balances. Deposits are the only operation that may
/// change it; a sale just moves money between two accounts.
pub fn total_money(market: &Market) -> Money {
    market.accounts.foldl(0, |sum, &balance| nat::add(sum, balance))
}

/// Route an operation to its handler.
pub fn apply_operation(market: &Market, op: &Operation) -> Result<Market, MarketError> {
    match *op {
        Operation::Deposit { user, amount } => deposit(market, user, amount),
        Operation::Assign { item, user } => assign(market, item, user),
        Operation::Price { item, amount } => price(market, item, amount),
        Operation::Sell { item, buyer } => sell(market, item, buyer),
    }
}

/// How [`run_script`] treats a rejected operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReplayMode {
    /// Stop at the first rejection.
    Strict,
    /// Record the rejection and keep going from the unchanged state.
    Lenient,
}

/// One rejected operation: where in the script, and why.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Failure {
    pub index: usize,
    pub error: MarketError,
}

/// Outcome of replaying a script.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Replay {
    /// Number of operations in the script.
    pub operations_total: usize,
    /// Successful sales.
    pub sell_count: usize,
    pub failures: Vec<Failure>,
    /// True when a strict replay stopped early; the first (only) entry of
    /// `failures` is the operation it stopped at.
    pub aborted: bool,
}

/// Fold a script over the market, one operation at a time.
///
/// A rejected operation never leaves a trace in the state: in lenient mode
/// the market prior to it simply carries forward, in strict mode it is also
/// where the replay stops.
pub fn run_script(market: &Market, ops: &[Operation], mode: ReplayMode) -> (Market, Replay) {
    let mut current = market.clone();
    let mut replay = Replay {
        operations_total: ops.len(),
        ..Replay::default()
    };
    for (index, op) in ops.iter().enumerate() {
        match apply_operation(&current, op) {
            Ok(next) => {
                if matches!(op, Operation::Sell { .. }) {
                    replay.sell_count += 1;
                }
                current = next;
            }
            Err(error) => {
                replay.failures.push(Failure { index, error });
                if mode == ReplayMode::Strict {
                    replay.aborted = true;
                    break;
                }
            }
        }
    }
    (current, replay)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn market(accounts: &[Money], items: &[Item]) -> Market {
        Market {
            accounts: ConsList::from(accounts),
            items: ConsList::from(items),
        }
    }

    fn item(owner: Nat, price: Money) -> Item {
        Item { owner, price }
    }

    #[test]
    fn deposit_at_the_next_index_opens_an_account() {
        let m = deposit(&Market::empty(), 0, 100).unwrap();
        assert_eq!(m, market(&[100], &[]));
    }

    #[test]
    fn deposit_on_an_existing_account_credits_it() {
        let m = deposit(&market(&[100], &[]), 0, 50).unwrap();
        assert_eq!(m, market(&[150], &[]));
    }

    #[test]
    fn deposit_past_the_next_index_is_a_gap() {
        let err = deposit(&market(&[100], &[]), 2, 50).unwrap_err();
        assert_eq!(err, MarketError::UserIndexGap { user: 2, next_free: 1 });
    }

    #[test]
    fn assign_declares_an_unadvertised_item() {
        let m = assign(&market(&[100], &[]), 0, 0).unwrap();
        assert_eq!(m, market(&[100], &[item(0, 0)]));
    }

    #[test]
    fn assign_over_an_existing_item_resets_the_ad() {
        let m = assign(&market(&[100, 50], &[item(0, 30)]), 0, 1).unwrap();
        assert_eq!(m.items, ConsList::from(&[item(1, 0)][..]));
        assert_eq!(m.accounts, ConsList::from(&[100, 50][..]));
    }

    #[test]
    fn assign_needs_an_existing_user() {
        let err = assign(&Market::empty(), 0, 0).unwrap_err();
        assert_eq!(err, MarketError::UnknownUser { user: 0 });
    }

    #[test]
    fn assign_past_the_next_item_index_is_a_gap() {
        let err = assign(&market(&[100], &[]), 3, 0).unwrap_err();
        assert_eq!(err, MarketError::ItemIndexGap { item: 3, next_free: 0 });
    }

    #[test]
    fn price_advertises_and_hides() {
        let m0 = market(&[100], &[item(0, 0)]);
        let advertised = price(&m0, 0, 25).unwrap();
        assert_eq!(advertised.items, ConsList::from(&[item(0, 25)][..]));
        assert!(is_advertised(&advertised, 0).unwrap());

        let hidden = price(&advertised, 0, 0).unwrap();
        assert_eq!(hidden.items, ConsList::from(&[item(0, 0)][..]));
        assert!(!is_advertised(&hidden, 0).unwrap());
    }

    #[test]
    fn price_on_a_missing_item_is_rejected() {
        let err = price(&market(&[100], &[]), 0, 10).unwrap_err();
        assert_eq!(err, MarketError::UnknownItem { item: 0 });
    }

    #[test]
    fn sell_moves_the_item_and_the_money_together() {
        let m = sell(&market(&[100, 50], &[item(0, 30)]), 0, 1).unwrap();
        assert_eq!(m, market(&[130, 20], &[item(1, 0)]));
    }

    #[test]
    fn sell_rejects_a_hidden_item() {
        let err = sell(&market(&[100, 50], &[item(0, 0)]), 0, 1).unwrap_err();
        assert_eq!(err, MarketError::NotAdvertised { item: 0 });
    }

    #[test]
    fn sell_rejects_a_buyer_who_cannot_pay() {
        let err = sell(&market(&[100, 20], &[item(0, 30)]), 0, 1).unwrap_err();
        assert_eq!(
            err,
            MarketError::InsufficientFunds { buyer: 1, balance: 20, price: 30 }
        );
    }

    #[test]
    fn self_sale_nets_to_zero_but_still_takes_the_ad_down() {
        let m = sell(&market(&[100], &[item(0, 30)]), 0, 0).unwrap();
        assert_eq!(m, market(&[100], &[item(0, 0)]));
    }

    #[test]
    fn sell_checks_the_item_before_the_buyer() {
        let err = sell(&Market::empty(), 0, 1).unwrap_err();
        assert_eq!(err, MarketError::UnknownItem { item: 0 });
    }

    #[test]
    fn total_money_sums_balances() {
        assert_eq!(total_money(&Market::empty()), 0);
        assert_eq!(total_money(&market(&[100, 50], &[])), 150);
    }

    #[test]
    fn apply_operation_routes_to_the_matching_handler() {
        let m = market(&[100, 50], &[item(0, 30)]);
        assert_eq!(
            apply_operation(&m, &Operation::Deposit { user: 0, amount: 5 }),
            deposit(&m, 0, 5)
        );
        assert_eq!(
            apply_operation(&m, &Operation::Assign { item: 0, user: 1 }),
            assign(&m, 0, 1)
        );
        assert_eq!(
            apply_operation(&m, &Operation::Price { item: 0, amount: 9 }),
            price(&m, 0, 9)
        );
        assert_eq!(
            apply_operation(&m, &Operation::Sell { item: 0, buyer: 1 }),
            sell(&m, 0, 1)
        );
    }

    #[test]
    fn run_script_on_an_empty_script_is_a_no_op() {
        let (m, replay) = run_script(&Market::empty(), &[], ReplayMode::Strict);
        assert_eq!(m, Market::empty());
        assert_eq!(replay.operations_total, 0);
        assert_eq!(replay.sell_count, 0);
        assert!(replay.failures.is_empty());
        assert!(!replay.aborted);
    }

    #[test]
    fn run_script_replays_a_full_buy_sell_exchange() {
        let ops = [
            Operation::Deposit { user: 0, amount: 100 },
            Operation::Assign { item: 0, user: 0 },
            Operation::Price { item: 0, amount: 30 },
            Operation::Deposit { user: 1, amount: 100 },
            Operation::Sell { item: 0, buyer: 1 },
        ];
        let (m, replay) = run_script(&Market::empty(), &ops, ReplayMode::Strict);
        assert_eq!(m, market(&[130, 70], &[item(1, 0)]));
        assert_eq!(replay.sell_count, 1);
        assert!(replay.failures.is_empty());
        assert_eq!(total_money(&m), 200);
    }

    #[test]
    fn lenient_replay_records_the_failure_and_keeps_going() {
        let ops = [
            Operation::Deposit { user: 0, amount: 100 },
            Operation::Assign { item: 0, user: 0 },
            // item 0 was never priced, so this sale must be rejected
            Operation::Sell { item: 0, buyer: 0 },
            Operation::Deposit { user: 1, amount: 40 },
        ];
        let (m, replay) = run_script(&Market::empty(), &ops, ReplayMode::Lenient);
        assert_eq!(replay.failures.len(), 1);
        assert_eq!(replay.failures[0].index, 2);
        assert_eq!(replay.failures[0].error, MarketError::NotAdvertised { item: 0 });
        assert!(!replay.aborted);
        // the deposit after the failed sale still landed
        assert_eq!(m.accounts, ConsList::from(&[100, 40][..]));
    }

    #[test]
    fn strict_replay_stops_at_the_first_failure() {
        let ops = [
            Operation::Deposit { user: 0, amount: 100 },
            Operation::Sell { item: 5, buyer: 0 },
            Operation::Deposit { user: 1, amount: 40 },
        ];
        let (m, replay) = run_script(&Market::empty(), &ops, ReplayMode::Strict);
        assert!(replay.aborted);
        assert_eq!(replay.failures.len(), 1);
        assert_eq!(replay.failures[0].index, 1);
        assert_eq!(replay.failures[0].error, MarketError::UnknownItem { item: 5 });
        // state is exactly what the operations before the failure produced
        assert_eq!(m, market(&[100], &[]));
    }

    #[test]
    fn rejected_operations_leave_the_input_market_untouched() {
        let m = market(&[100, 20], &[item(0, 30)]);
        let snapshot = m.clone();
        assert!(sell(&m, 0, 5).is_err());
        assert!(sell(&m, 3, 1).is_err());
        assert!(deposit(&m, 9, 1).is_err());
        assert!(assign(&m, 5, 0).is_err());
        assert!(price(&m, 9, 1).is_err());
        assert_eq!(m, snapshot);
    }
}

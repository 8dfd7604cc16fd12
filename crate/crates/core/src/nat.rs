//! Natural-number arithmetic shared by every module.
//!
//! A [`Nat`] is a non-negative integer backed by a machine word. Nothing in
//! this crate may produce a negative value or wrap around silently:
//! subtraction truncates at zero ([`monus`]), and additive operations abort
//! with a diagnostic on overflow instead of wrapping.

/// Non-negative integer: indices, counters, and money amounts.
pub type Nat = u64;

/// Successor: `n + 1`. Aborts if the result does not fit in a [`Nat`].
#[inline]
pub fn succ(n: Nat) -> Nat {
    match n.checked_add(1) {
        Some(next) => next,
        None => panic!("natural-number overflow: succ({n})"),
    }
}

/// Checked addition. Aborts on overflow rather than wrapping.
#[inline]
pub fn add(a: Nat, b: Nat) -> Nat {
    match a.checked_add(b) {
        Some(sum) => sum,
        None => panic!("natural-number overflow: {a} + {b}"),
    }
}

/// Checked multiplication. Aborts on overflow rather than wrapping.
#[inline]
pub fn mul(a: Nat, b: Nat) -> Nat {
    match a.checked_mul(b) {
        Some(product) => product,
        None => panic!("natural-number overflow: {a} * {b}"),
    }
}

/// Predecessor truncated at zero: the inverse of [`succ`] on positive
/// numbers, and 0 on 0.
#[inline]
pub fn monus1(index: Nat) -> Nat {
    if index > 0 {
        index - 1
    } else {
        0
    }
}

/// Truncated subtraction: `max(a - b, 0)`.
#[inline]
pub fn monus(a: Nat, b: Nat) -> Nat {
    a.saturating_sub(b)
}

//! Immutable singly-linked list with structural sharing.
//!
//! A [`ConsList`] is either empty or an element prepended to another list.
//! Updates never modify an existing list: they build a new one that shares
//! the untouched tail with the original, so lists can be handed across
//! threads freely.
//!
//! Each traversal operation comes in a production form that runs in constant
//! stack space ([`ConsList::length_tr`], [`ConsList::length_fl`],
//! [`ConsList::get`], [`ConsList::set`]) and, where a structurally recursive
//! definition is the clearer statement of intent, a naive form
//! ([`ConsList::length_def`], [`ConsList::set_def`]) whose stack use grows
//! with the list. The naive forms exist as reference points for the property
//! suites; they are deliberately kept out of every large-input code path.

use std::fmt;
use std::sync::Arc;

use crate::nat::{self, Nat};

type Link<A> = Option<Arc<Node<A>>>;

struct Node<A> {
    head: A,
    tail: Link<A>,
}

// Chain a freshly built node onto the slot and return the slot for the
// next one. Building front-to-back this way needs no intermediate buffer
// and no recursion; `get_mut` on a node that was created one line above
// cannot fail.
#[inline]
fn push_slot<A>(slot: &mut Link<A>, head: A, tail: Link<A>) -> &mut Link<A> {
    *slot = Some(Arc::new(Node { head, tail }));
    &mut Arc::get_mut(slot.as_mut().expect("slot was just filled"))
        .expect("a new node has no other owners")
        .tail
}

/// Immutable list: `Nil` or a head element followed by a tail list.
pub struct ConsList<A> {
    node: Link<A>,
}

impl<A> ConsList<A> {
    /// The empty list.
    pub fn new() -> Self {
        ConsList { node: None }
    }

    /// New list with `head` prepended; the receiver is shared as the tail.
    pub fn cons(&self, head: A) -> Self {
        ConsList {
            node: Some(Arc::new(Node {
                head,
                tail: self.node.clone(),
            })),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.node.is_none()
    }

    /// First element, if any.
    pub fn head(&self) -> Option<&A> {
        self.node.as_deref().map(|node| &node.head)
    }

    /// Everything after the first element; `None` on the empty list.
    pub fn tail(&self) -> Option<ConsList<A>> {
        self.node.as_deref().map(|node| ConsList {
            node: node.tail.clone(),
        })
    }

    pub fn iter(&self) -> Iter<'_, A> {
        Iter { next: &self.node }
    }

    /// Left fold: combines an accumulator with each element in list order.
    ///
    /// Runs as a loop, so it is safe on lists of any length and is the
    /// building block for the other constant-stack traversals.
    pub fn foldl<B, F>(&self, initial: B, mut next: F) -> B
    where
        F: FnMut(B, &A) -> B,
    {
        let mut accum = initial;
        let mut cursor = &self.node;
        while let Some(node) = cursor {
            accum = next(accum, &node.head);
            cursor = &node.tail;
        }
        accum
    }

    /// Element count via an explicit accumulator seeded at `accum`.
    ///
    /// Kept public so the accumulator behavior is directly checkable:
    /// `list.tailrec_length(accum) == list.tailrec_length(0) + accum`.
    pub fn tailrec_length(&self, accum: Nat) -> Nat {
        let mut count = accum;
        let mut cursor = &self.node;
        while let Some(node) = cursor {
            count = nat::succ(count);
            cursor = &node.tail;
        }
        count
    }

    /// Element count in constant stack space.
    pub fn length_tr(&self) -> Nat {
        self.tailrec_length(0)
    }

    /// Element count expressed as a fold.
    pub fn length_fl(&self) -> Nat {
        self.foldl(0, |accum, _elem| nat::succ(accum))
    }

    /// Element count via direct structural recursion.
    ///
    /// Stack use grows linearly with the list, so this cannot handle long
    /// lists (it will exhaust the stack somewhere around 10^4 elements on
    /// small thread stacks). It is the reference definition the efficient
    /// variants are checked against; use [`ConsList::length_tr`] everywhere
    /// else.
    pub fn length_def(&self) -> Nat {
        match &self.node {
            None => 0,
            Some(node) => {
                let rest = ConsList {
                    node: node.tail.clone(),
                };
                nat::add(rest.length_def(), 1)
            }
        }
    }

    /// Element at a zero-based `index`, or `None` when the index is out of
    /// range. Never panics; constant stack space.
    pub fn get(&self, index: Nat) -> Option<&A> {
        let mut remaining = index;
        let mut cursor = &self.node;
        while let Some(node) = cursor {
            if remaining == 0 {
                return Some(&node.head);
            }
            remaining = nat::monus1(remaining);
            cursor = &node.tail;
        }
        None
    }
}

impl<A: Clone> ConsList<A> {
    /// New list equal to `self` except that position `index` holds
    /// `element`. When `index` is out of range the result equals the input.
    ///
    /// Rebuilds the prefix up to `index` and shares the rest, in constant
    /// stack space; structurally equivalent to [`ConsList::set_def`] on all
    /// inputs.
    pub fn set(&self, index: Nat, element: A) -> Self {
        let mut head: Link<A> = None;
        let mut slot = &mut head;
        let mut cursor = &self.node;
        let mut remaining = index;
        loop {
            match cursor {
                None => {
                    // Ran off the end before reaching the index: the
                    // original list already is the result. Hand the
                    // half-built prefix to the iterative drop.
                    drop(ConsList { node: head });
                    return self.clone();
                }
                Some(node) => {
                    if remaining == 0 {
                        *slot = Some(Arc::new(Node {
                            head: element,
                            tail: node.tail.clone(),
                        }));
                        return ConsList { node: head };
                    }
                    slot = push_slot(slot, node.head.clone(), None);
                    cursor = &node.tail;
                    remaining = nat::monus1(remaining);
                }
            }
        }
    }

    // Single-pass upsert append: a new list with `element` at position
    // `index` when that is the next free position, otherwise the current
    // length. Only the market's declare operations need this.
    pub(crate) fn append_if_next(&self, index: Nat, element: A) -> Result<Self, Nat> {
        let mut head: Link<A> = None;
        let mut slot = &mut head;
        let mut cursor = &self.node;
        let mut position: Nat = 0;
        loop {
            match cursor {
                Some(node) => {
                    if position == index {
                        // the position is occupied: not an append
                        return Err(self.length_tr());
                    }
                    slot = push_slot(slot, node.head.clone(), None);
                    cursor = &node.tail;
                    position = nat::succ(position);
                }
                None => {
                    if position == index {
                        *slot = Some(Arc::new(Node { head: element, tail: None }));
                        return Ok(ConsList { node: head });
                    }
                    return Err(position);
                }
            }
        }
    }

    /// Positional update by direct structural recursion.
    ///
    /// Reference definition for [`ConsList::set`]: same result on every
    /// input, but the recursion depth (and therefore stack use) grows with
    /// `index`, so this is only suitable for short lists.
    pub fn set_def(&self, index: Nat, element: A) -> Self {
        match &self.node {
            None => ConsList::new(),
            Some(node) => {
                let tail = ConsList {
                    node: node.tail.clone(),
                };
                if index == 0 {
                    tail.cons(element)
                } else {
                    tail.set_def(nat::monus1(index), element)
                        .cons(node.head.clone())
                }
            }
        }
    }
}

impl<A> Default for ConsList<A> {
    fn default() -> Self {
        ConsList::new()
    }
}

impl<A> Clone for ConsList<A> {
    fn clone(&self) -> Self {
        ConsList {
            node: self.node.clone(),
        }
    }
}

// The derived drop would recurse once per node and exhaust the stack on long
// lists. Walk the chain instead, stopping at the first node another list
// still shares.
impl<A> Drop for ConsList<A> {
    fn drop(&mut self) {
        let mut link = self.node.take();
        while let Some(node) = link {
            match Arc::try_unwrap(node) {
                Ok(mut node) => link = node.tail.take(),
                Err(_shared) => break,
            }
        }
    }
}

// Structural equality: same length and pairwise-equal elements. Written over
// the iterator so comparing long lists does not recurse.
impl<A: PartialEq> PartialEq for ConsList<A> {
    fn eq(&self, other: &Self) -> bool {
        self.iter().eq(other.iter())
    }
}

impl<A: Eq> Eq for ConsList<A> {}

impl<A: fmt::Debug> fmt::Debug for ConsList<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.iter()).finish()
    }
}

impl<A> FromIterator<A> for ConsList<A> {
    fn from_iter<I: IntoIterator<Item = A>>(iter: I) -> Self {
        let mut head: Link<A> = None;
        let mut slot = &mut head;
        for element in iter {
            slot = push_slot(slot, element, None);
        }
        ConsList { node: head }
    }
}

impl<A> From<Vec<A>> for ConsList<A> {
    fn from(elements: Vec<A>) -> Self {
        elements.into_iter().collect()
    }
}

impl<A: Clone> From<&[A]> for ConsList<A> {
    fn from(elements: &[A]) -> Self {
        elements.iter().cloned().collect()
    }
}

pub struct Iter<'a, A> {
    next: &'a Link<A>,
}

impl<'a, A> Iterator for Iter<'a, A> {
    type Item = &'a A;

    fn next(&mut self) -> Option<&'a A> {
        match self.next {
            None => None,
            Some(node) => {
                self.next = &node.tail;
                Some(&node.head)
            }
        }
    }
}

impl<'a, A> IntoIterator for &'a ConsList<A> {
    type Item = &'a A;
    type IntoIter = Iter<'a, A>;

    fn into_iter(self) -> Iter<'a, A> {
        self.iter()
    }
}

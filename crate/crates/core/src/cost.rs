//! Edge weights and possibly-infinite solution costs.

use std::fmt;
use std::ops::Add;

/// Weight of a single edge.
pub type EdgeWeight = u64;

/// Sum of edge weights. Wide enough that summing `u64` weights over any
/// realistic edge count cannot overflow.
pub type Weight = u128;

/// A solution cost: either a finite weight or the value of `min {}`.
///
/// The derived ordering places every finite value below `Infinite`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Cost {
    Finite(Weight),
    Infinite,
}

impl Cost {
    pub const ZERO: Cost = Cost::Finite(0);

    pub fn is_finite(self) -> bool {
        matches!(self, Cost::Finite(_))
    }

    pub fn finite(self) -> Option<Weight> {
        match self {
            Cost::Finite(w) => Some(w),
            Cost::Infinite => None,
        }
    }
}

impl From<Weight> for Cost {
    fn from(w: Weight) -> Self {
        Cost::Finite(w)
    }
}

impl Add for Cost {
    type Output = Cost;

    fn add(self, rhs: Cost) -> Cost {
        match (self, rhs) {
            (Cost::Finite(a), Cost::Finite(b)) => Cost::Finite(a + b),
            _ => Cost::Infinite,
        }
    }
}

impl fmt::Display for Cost {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cost::Finite(w) => write!(f, "{w}"),
            Cost::Infinite => f.write_str("INF"),
        }
    }
}

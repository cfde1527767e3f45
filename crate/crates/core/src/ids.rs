use crate::{Error, Result};

macro_rules! id_type {
    ($(#[$doc:meta])* $name:ident) => {
        $(#[$doc])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub usize);

        impl From<usize> for $name {
            fn from(i: usize) -> Self {
                $name(i)
            }
        }

        impl std::fmt::Display for $name {
            fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
                write!(f, "{}", self.0)
            }
        }
    };
}

id_type!(
    /// Index of a man, dense in `[0, n)`.
    Man
);
id_type!(
    /// Index of a woman, dense in `[0, n)`.
    Woman
);
id_type!(
    /// Index of a dog (the third side in the cyclic 3D setting).
    Dog
);

/// A strict complete order over the `n` agents of one side, most preferred
/// first. Stored together with the inverse rank table so that comparisons
/// are O(1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrictOrder {
    ranked: Vec<usize>,
    rank: Vec<usize>,
}

impl StrictOrder {
    /// Builds an order from the ranked list, which must be a permutation of
    /// `0..n`.
    pub fn new(ranked: Vec<usize>) -> Result<Self> {
        let n = ranked.len();
        let mut rank = vec![usize::MAX; n];
        for (pos, &x) in ranked.iter().enumerate() {
            if x >= n {
                return Err(Error::InvalidOrder {
                    n,
                    reason: format!("index {x} out of range"),
                });
            }
            if rank[x] != usize::MAX {
                return Err(Error::InvalidOrder {
                    n,
                    reason: format!("index {x} repeated"),
                });
            }
            rank[x] = pos;
        }
        Ok(StrictOrder { ranked, rank })
    }

    pub fn len(&self) -> usize {
        self.ranked.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranked.is_empty()
    }

    /// Agents from most to least preferred.
    pub fn ranked(&self) -> &[usize] {
        &self.ranked
    }

    /// Position of `x`, 0 = most preferred.
    pub fn rank(&self, x: usize) -> usize {
        self.rank[x]
    }

    /// True iff `x` is strictly preferred to `y`.
    pub fn prefers(&self, x: usize, y: usize) -> bool {
        self.rank[x] < self.rank[y]
    }

    pub fn top(&self) -> usize {
        self.ranked[0]
    }

    pub fn last(&self) -> usize {
        self.ranked[self.ranked.len() - 1]
    }
}

pub(crate) fn check_index(index: usize, n: usize) -> Result<()> {
    if index < n {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange { index, n })
    }
}

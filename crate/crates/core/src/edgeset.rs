use std::cmp::Ordering;
use std::fmt;

const WORDS: usize = 4;

/// Fixed-capacity bitset over edge ids.
///
/// Ordering is lexicographic on the membership vector read in edge-id order
/// with absent < present: of two sets, the smaller is the one that lacks the
/// lowest id on which they differ.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct EdgeSet([u64; WORDS]);

impl EdgeSet {
    pub const CAPACITY: usize = WORDS * 64;

    pub const fn new() -> Self {
        EdgeSet([0; WORDS])
    }

    pub fn from_ids<I: IntoIterator<Item = usize>>(ids: I) -> Self {
        let mut set = Self::new();
        for id in ids {
            set.insert(id);
        }
        set
    }

    /// All ids in `0..n`.
    pub fn full(n: usize) -> Self {
        assert!(n <= Self::CAPACITY);
        let mut set = Self::new();
        for (w, word) in set.0.iter_mut().enumerate() {
            let lo = w * 64;
            if n >= lo + 64 {
                *word = u64::MAX;
            } else if n > lo {
                *word = (1u64 << (n - lo)) - 1;
            }
        }
        set
    }

    #[inline]
    pub fn insert(&mut self, id: usize) {
        self.0[id >> 6] |= 1u64 << (id & 63);
    }

    #[inline]
    pub fn remove(&mut self, id: usize) {
        self.0[id >> 6] &= !(1u64 << (id & 63));
    }

    #[inline]
    pub fn contains(&self, id: usize) -> bool {
        id < Self::CAPACITY && self.0[id >> 6] & (1u64 << (id & 63)) != 0
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0) {
            *a |= b;
        }
        out
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0) {
            *a &= b;
        }
        out
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0) {
            *a &= !b;
        }
        out
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.0.iter().zip(other.0).all(|(a, b)| a & b == 0)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.0.iter().zip(other.0).all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let tz = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + tz)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl Ord for EdgeSet {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.0.iter().zip(other.0) {
            let diff = a ^ b;
            if diff != 0 {
                let lowest = diff & diff.wrapping_neg();
                // The set holding the lowest differing id is the larger one.
                return if a & lowest != 0 { Ordering::Greater } else { Ordering::Less };
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for EdgeSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Self::from_ids(iter)
    }
}

use smallvec::{smallvec, SmallVec};

/// A set of world indices `0..universe`, stored as a bitset that stays
/// inline for models of up to 64 worlds.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WorldSet {
    universe: usize,
    blocks: SmallVec<[u64; 1]>,
}

fn block_count(universe: usize) -> usize {
    universe.div_ceil(64).max(1)
}

impl WorldSet {
    pub fn empty(universe: usize) -> Self {
        WorldSet {
            universe,
            blocks: smallvec![0; block_count(universe)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = WorldSet {
            universe,
            blocks: smallvec![!0; block_count(universe)],
        };
        s.trim();
        s
    }

    pub fn from_indices(universe: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = WorldSet::empty(universe);
        for i in indices {
            s.insert(i);
        }
        s
    }

    fn trim(&mut self) {
        let rem = self.universe % 64;
        if rem != 0 {
            *self.blocks.last_mut().unwrap() &= (1u64 << rem) - 1;
        }
        if self.universe == 0 {
            self.blocks[0] = 0;
        }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, i: usize) {
        assert!(
            i < self.universe,
            "world {i} outside universe {}",
            self.universe
        );
        self.blocks[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.universe && self.blocks[i / 64] & (1 << (i % 64)) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.universe
    }

    pub fn is_subset(&self, other: &WorldSet) -> bool {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &WorldSet) -> bool {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .any(|(a, b)| a & b != 0)
    }

    pub fn union(&self, other: &WorldSet) -> WorldSet {
        self.zip_with(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &WorldSet) -> WorldSet {
        self.zip_with(other, |a, b| a & b)
    }

    pub fn complement(&self) -> WorldSet {
        let mut s = WorldSet {
            universe: self.universe,
            blocks: self.blocks.iter().map(|b| !b).collect(),
        };
        s.trim();
        s
    }

    fn zip_with(&self, other: &WorldSet, op: impl Fn(u64, u64) -> u64) -> WorldSet {
        debug_assert_eq!(self.universe, other.universe);
        WorldSet {
            universe: self.universe,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.universe).filter(move |&i| self.contains(i))
    }
}

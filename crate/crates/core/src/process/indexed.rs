use rand::Rng;

const ABSENT: u32 = u32::MAX;

/// Subset of `0..universe` with O(1) insert, remove, and uniform draw.
#[derive(Clone, Debug)]
pub(crate) struct IndexedSet {
    items: Vec<u32>,
    pos: Vec<u32>,
}

impl IndexedSet {
    pub fn full(universe: usize) -> Self {
        IndexedSet { items: (0..universe as u32).collect(), pos: (0..universe as u32).collect() }
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.pos[x] != ABSENT
    }

    /// Returns whether `x` was present.
    #[inline]
    pub fn remove(&mut self, x: usize) -> bool {
        let p = self.pos[x];
        if p == ABSENT {
            return false;
        }
        let last = self.items.pop().unwrap();
        if last as usize != x {
            self.items[p as usize] = last;
            self.pos[last as usize] = p;
        }
        self.pos[x] = ABSENT;
        true
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<usize> {
        (!self.items.is_empty()).then(|| self.items[rng.random_range(0..self.items.len())] as usize)
    }

    pub fn items(&self) -> &[u32] {
        &self.items
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn remove_and_contains() {
        let mut s = IndexedSet::full(10);
        assert!(s.remove(3));
        assert!(!s.remove(3));
        assert!(s.remove(9));
        assert_eq!(s.len(), 8);
        assert!(!s.contains(9) && s.contains(0));
        let mut v = s.items().to_vec();
        v.sort();
        assert_eq!(v, vec![0, 1, 2, 4, 5, 6, 7, 8]);
    }
}

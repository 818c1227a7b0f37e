/// Disjoint-set forest whose roots are always the smallest index of their set.
///
/// Linking the larger root under the smaller one keeps every parent pointer
/// pointing backwards (`parent[x] <= x`), so a forward scan meets each
/// set's root before any other member.
#[derive(Debug, Clone, Default)]
pub struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        let mut uf = UnionFind::default();
        uf.reset(n);
        uf
    }

    /// Make every element a singleton again, reusing the allocation.
    pub fn reset(&mut self, n: usize) {
        assert!(n < u32::MAX as usize, "UnionFind supports fewer than 2^32 - 1 elements");
        self.parent.clear();
        self.parent.extend(0..n as u32);
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Root of `x`, halving the path on the way.
    #[inline]
    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let grandparent = self.parent[self.parent[x] as usize];
            self.parent[x] = grandparent;
            x = grandparent as usize;
        }
        x
    }

    /// Merge the sets of `a` and `b`; returns the surviving (smaller) root.
    #[inline]
    pub fn union(&mut self, a: usize, b: usize) -> usize {
        let (ra, rb) = (self.find(a), self.find(b));
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo as u32;
        lo
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }
}

//! Union-find over dense node indices.

/// Disjoint sets with path compression and union by size. The number of
/// classes is maintained incrementally.
#[derive(Debug, Clone, Default)]
pub struct Partition {
    parent: Vec<u32>,
    size: Vec<u32>,
    components: usize,
}

impl Partition {
    pub fn new(len: usize) -> Self {
        let mut p = Self::default();
        p.reset(len);
        p
    }

    /// Back to `len` singletons, reusing the allocation.
    pub fn reset(&mut self, len: usize) {
        assert!(len <= u32::MAX as usize);
        self.parent.clear();
        self.parent.extend(0..len as u32);
        self.size.clear();
        self.size.resize(len, 1);
        self.components = len;
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] as usize != root {
            root = self.parent[root] as usize;
        }
        let mut cur = x;
        while self.parent[cur] as usize != root {
            let next = self.parent[cur] as usize;
            self.parent[cur] = root as u32;
            cur = next;
        }
        root
    }

    /// Merges the classes of `x` and `y`; returns `true` if they were distinct.
    pub fn union(&mut self, x: usize, y: usize) -> bool {
        let (mut rx, mut ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        if self.size[rx] < self.size[ry] {
            std::mem::swap(&mut rx, &mut ry);
        }
        self.parent[ry] = rx as u32;
        self.size[rx] += self.size[ry];
        self.components -= 1;
        true
    }

    pub fn components(&self) -> usize {
        self.components
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_classes() {
        let mut p = Partition::new(6);
        assert_eq!(p.components(), 6);
        assert!(p.union(0, 1));
        assert!(p.union(2, 3));
        assert!(!p.union(1, 0));
        assert!(p.union(1, 3));
        assert_eq!(p.components(), 3);
        assert_eq!(p.find(0), p.find(2));
        assert_ne!(p.find(0), p.find(4));
        p.reset(2);
        assert_eq!(p.components(), 2);
        assert_eq!(p.len(), 2);
    }
}

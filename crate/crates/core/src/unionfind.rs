/// Disjoint sets over `0..n` whose root is always the least member of its class.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    /// Class index of every element, classes numbered in order of their least member.
    pub fn classes(&mut self) -> Quotient {
        let n = self.parent.len();
        let mut class_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for x in 0..n {
            let r = self.find(x);
            if r == x {
                class_of[x] = reps.len();
                reps.push(x);
            } else {
                class_of[x] = class_of[r];
            }
        }
        Quotient { class_of, reps }
    }
}

/// The result of closing an equivalence relation: class index per element and the
/// least representative of each class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quotient {
    pub class_of: Vec<usize>,
    pub reps: Vec<usize>,
}

impl Quotient {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn least_member_is_root() {
        let mut uf = UnionFind::new(6);
        uf.union(5, 3);
        uf.union(3, 4);
        uf.union(1, 5);
        assert_eq!(uf.find(4), 1);
        let q = uf.classes();
        assert_eq!(q.reps, vec![0, 1, 2]);
        assert_eq!(q.class_of, vec![0, 1, 2, 1, 1, 1]);
    }

    #[test]
    fn empty() {
        let mut uf = UnionFind::new(0);
        assert!(uf.classes().is_empty());
    }
}

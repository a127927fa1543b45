/// Union-find over unknowns `x_i ∈ Z/p`, recording differences
/// `x_i - x_root`.
#[derive(Clone, Debug)]
pub struct WeightedUnionFind {
    p: u32,
    parent: Vec<usize>,
    /// `x_i - x_parent(i)` mod `p`.
    diff: Vec<u32>,
}

impl WeightedUnionFind {
    pub fn new(n: usize, p: u32) -> Self {
        WeightedUnionFind {
            p,
            parent: (0..n).collect(),
            diff: vec![0; n],
        }
    }

    /// Root of `i` and `x_i - x_root`.
    pub fn find(&mut self, i: usize) -> (usize, u32) {
        let parent = self.parent[i];
        if parent == i {
            return (i, 0);
        }
        let (root, d) = self.find(parent);
        let total = (self.diff[i] + d) % self.p;
        self.parent[i] = root;
        self.diff[i] = total;
        (root, total)
    }

    /// Imposes `x_a - x_b = c`. Returns `Ok(true)` if this merged two
    /// components, `Ok(false)` if it was already implied, and `Err(r)` if it
    /// contradicts the existing constraints, where `r ≠ 0` is
    /// `c - (x_a - x_b)` as implied so far.
    pub fn relate(&mut self, a: usize, b: usize, c: u32) -> Result<bool, u32> {
        let p = self.p;
        let (ra, da) = self.find(a);
        let (rb, db) = self.find(b);
        if ra == rb {
            let implied = (da + p - db) % p;
            let gap = (c % p + p - implied) % p;
            return if gap == 0 { Ok(false) } else { Err(gap) };
        }
        // x_ra - x_rb = c - da + db
        self.parent[ra] = rb;
        self.diff[ra] = (c % p + p - da + db) % p;
        Ok(true)
    }
}

//! The two-vertex system of quads of a surface and the projection of walks into it.
//!
//! Vertex 0 is the contracted tree, vertex 1 the center of the reduced face. Spoke `i`
//! (dart `2i`, from vertex 0) leaves vertex 0 at rotation index `i`, inside the gap that
//! follows the `i`-th leftover dart counterclockwise.

use crate::error::{Error, Result};
use crate::surface::{edge_of, opp, EdgeClass, Surface, NONE};

#[derive(Clone, Debug)]
pub struct QuadSystem {
    pub surface: Surface,
    genus: usize,
    deg: usize,
    idx: Vec<usize>,
    at: [Vec<usize>; 2],
    /// Image of each dart of the source graph: zero or two darts.
    q_table: Vec<Option<[usize; 2]>>,
}

impl QuadSystem {
    pub fn build(g: &Surface) -> Result<Self> {
        if g.genus() < 2 {
            return Err(Error::LowGenus(g.genus()));
        }
        let tc = g.tree_cotree();
        let red = g.reduce(&tc)?;
        let r = &red.surface;
        let lrot = r.rotation(0);
        let deg = lrot.len();
        let mut lpos = vec![NONE; deg];
        for (i, &l) in lrot.iter().enumerate() {
            lpos[l] = i;
        }
        // corners of the reduced face in clockwise order; the ccw rotation at the center
        // lists them in reverse
        let walk = r.face_walk(0);
        let rot_y: Vec<usize> = walk.iter().rev().map(|&d| 2 * lpos[opp(d)] + 1).collect();
        let rot_x: Vec<usize> = (0..deg).map(|i| 2 * i).collect();
        let surface = Surface::from_rotations(&[rot_x.clone(), rot_y.clone()])?;
        let mut idx = vec![0; 2 * deg];
        for (i, &d) in rot_x.iter().enumerate() {
            idx[d] = i;
        }
        for (i, &d) in rot_y.iter().enumerate() {
            idx[d] = i;
        }
        // gap of each non-tree dart of g: index of the last leftover dart at or before it
        let mut gap = vec![NONE; g.num_darts()];
        let n = red.order.len();
        let first_l = red
            .order
            .iter()
            .position(|&d| tc.class[edge_of(d)] == EdgeClass::Leftover)
            .expect("leftover edges exist in positive genus");
        let mut cur = NONE;
        for k in 0..n {
            let d = red.order[(first_l + k) % n];
            if tc.class[edge_of(d)] == EdgeClass::Leftover {
                cur = lpos[red.to_reduced_dart(d)];
            }
            gap[d] = cur;
        }
        let q_table = (0..g.num_darts())
            .map(|d| match tc.class[edge_of(d)] {
                EdgeClass::Tree => None,
                EdgeClass::Leftover => {
                    let p = gap[d];
                    let before = (p + deg - 1) % deg;
                    Some([2 * before, 2 * gap[opp(d)] + 1])
                }
                EdgeClass::Cotree => {
                    if gap[d] == gap[opp(d)] {
                        None
                    } else {
                        Some([2 * gap[d], 2 * gap[opp(d)] + 1])
                    }
                }
            })
            .collect();
        let qs = QuadSystem { surface, genus: g.genus(), deg, idx, at: [rot_x, rot_y], q_table };
        qs.check_shape()?;
        Ok(qs)
    }

    fn check_shape(&self) -> Result<()> {
        let s = &self.surface;
        let ok = s.num_vertices() == 2
            && s.num_edges() == self.deg
            && s.num_faces() == 2 * self.genus
            && (0..s.num_faces()).all(|f| s.face_degree(f) == 4)
            && (0..s.num_darts()).all(|d| s.tail(d) != s.head(d));
        if ok {
            Ok(())
        } else {
            Err(Error::Invalid("quad system has the wrong shape".into()))
        }
    }

    pub fn genus(&self) -> usize {
        self.genus
    }
    /// Degree `4g` of both vertices.
    pub fn degree(&self) -> usize {
        self.deg
    }
    #[inline]
    pub fn idx(&self, d: usize) -> usize {
        self.idx[d]
    }
    #[inline]
    pub fn tail(&self, d: usize) -> usize {
        d & 1
    }
    #[inline]
    pub fn head(&self, d: usize) -> usize {
        1 - (d & 1)
    }
    #[inline]
    pub fn dart_at(&self, v: usize, i: i64) -> usize {
        self.at[v][i.rem_euclid(self.deg as i64) as usize]
    }
    /// The dart `k` steps counterclockwise from `d` around its tail.
    #[inline]
    pub fn rot(&self, d: usize, k: i64) -> usize {
        self.dart_at(self.tail(d), self.idx[d] as i64 + k)
    }
    #[inline]
    pub fn phi(&self, d: usize) -> usize {
        self.surface.phi(d)
    }

    /// Number of quad corners to the right of the path `d1 d2` at their common vertex,
    /// negated when more than half of them lie on the right.
    #[inline]
    pub fn turn(&self, d1: usize, d2: usize) -> i64 {
        self.normalize_turn(self.idx[d2] as i64 - self.idx[opp(d1)] as i64)
    }

    /// The representative of `t` modulo the degree in `(-2g, 2g]`.
    #[inline]
    pub fn normalize_turn(&self, t: i64) -> i64 {
        let deg = self.deg as i64;
        let t = t.rem_euclid(deg);
        if t > deg / 2 {
            t - deg
        } else {
            t
        }
    }

    /// The dart following `d` with the given turn.
    #[inline]
    pub fn next_with_turn(&self, d: usize, t: i64) -> usize {
        self.rot(opp(d), t)
    }

    /// The dart preceding `d` with the given turn.
    #[inline]
    pub fn prev_with_turn(&self, d: usize, t: i64) -> usize {
        opp(self.rot(d, -t))
    }

    pub fn q(&self, d: usize) -> Option<[usize; 2]> {
        self.q_table[d]
    }

    /// Image of a walk of the source graph.
    pub fn project(&self, walk: &[usize]) -> Vec<usize> {
        let mut out = Vec::with_capacity(2 * walk.len());
        for &d in walk {
            if let Some([a, b]) = self.q_table[d] {
                out.push(a);
                out.push(b);
            }
        }
        out
    }
}

/// Checks that `walk` is a walk of `s` (and closed when asked).
pub fn check_walk(s: &Surface, walk: &[usize], closed: bool) -> Result<()> {
    for &d in walk {
        if d >= s.num_darts() {
            return Err(Error::Walk(format!("dart {d} out of range")));
        }
    }
    for w in walk.windows(2) {
        if s.head(w[0]) != s.tail(w[1]) {
            return Err(Error::Walk(format!("darts {} and {} are not consecutive", w[0], w[1])));
        }
    }
    if closed {
        if let (Some(&a), Some(&b)) = (walk.first(), walk.last()) {
            if s.head(b) != s.tail(a) {
                return Err(Error::Walk("walk is not closed".into()));
            }
        }
    }
    Ok(())
}

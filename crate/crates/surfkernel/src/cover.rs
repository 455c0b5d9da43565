//! Star-shaped finite pieces of the universal cover of the quad system, and the simple
//! lift test built on them.
//!
//! A cover vertex is a vertex of the universal cover; edges are oriented toward the root
//! by distance. Every vertex keeps all of its parents, so the stored graph is the union
//! of all geodesics from the root to its vertices.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::quad::{check_walk, QuadSystem};
use crate::surface::{opp, Surface};

#[derive(Clone, Debug)]
pub struct StarShapedCover<'q> {
    q: &'q QuadSystem,
    proj: Vec<usize>,
    dist: Vec<usize>,
    /// Lifted darts leaving each vertex, keyed by the dart of the quad system.
    adj: Vec<BTreeMap<usize, usize>>,
    /// Darts toward the root: one or two for every vertex but the root.
    out: Vec<Vec<usize>>,
    edges: Vec<(usize, usize, usize)>,
}

/// Pending square completion: `v` hangs from `u` by `e`, and its second parent is the
/// far end of `to_x` from `u1`, joined to `v` by `x_to_v`.
struct Pending {
    u: usize,
    e: usize,
    v: usize,
    u1: usize,
    to_x: usize,
    x_to_v: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoverStats {
    pub vertices: usize,
    pub edges: usize,
    /// Squares of the cover whose four edges are all present.
    pub faces: usize,
    /// Edge sides not on a present square.
    pub boundary: usize,
}

impl<'q> StarShapedCover<'q> {
    pub fn new(q: &'q QuadSystem, base: usize) -> Self {
        StarShapedCover {
            q,
            proj: vec![base],
            dist: vec![0],
            adj: vec![BTreeMap::new()],
            out: vec![Vec::new()],
            edges: Vec::new(),
        }
    }

    pub fn quads(&self) -> &'q QuadSystem {
        self.q
    }
    pub fn root(&self) -> usize {
        0
    }
    pub fn num_vertices(&self) -> usize {
        self.proj.len()
    }
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }
    pub fn projection(&self, u: usize) -> usize {
        self.proj[u]
    }
    pub fn distance(&self, u: usize) -> usize {
        self.dist[u]
    }
    pub fn outgoing(&self, u: usize) -> &[usize] {
        &self.out[u]
    }
    /// Edges as `(u, v, e)` with `e` the quad dart from `u` to `v`, `v` farther from the root.
    pub fn edges(&self) -> &[(usize, usize, usize)] {
        &self.edges
    }
    pub fn contains_edge(&self, u: usize, e: usize) -> bool {
        self.adj[u].contains_key(&e)
    }
    pub fn opposite_vertex(&self, u: usize, e: usize) -> Option<usize> {
        self.adj[u].get(&e).copied()
    }

    fn add_vertex(&mut self, proj: usize, dist: usize) -> usize {
        self.proj.push(proj);
        self.dist.push(dist);
        self.adj.push(BTreeMap::new());
        self.out.push(Vec::new());
        self.proj.len() - 1
    }

    /// `u` is one closer to the root than `v`.
    fn add_edge(&mut self, u: usize, v: usize, e: usize) {
        debug_assert_eq!(self.dist[u] + 1, self.dist[v]);
        self.adj[u].insert(e, v);
        self.adj[v].insert(opp(e), u);
        self.out[v].push(opp(e));
        debug_assert!(self.out[v].len() <= 2);
        self.edges.push((u, v, e));
    }

    /// Least turn from an outgoing dart at `u` to `e`, with that dart; `None` at the root.
    fn turn(&self, u: usize, e: usize) -> Option<(i64, usize)> {
        let deg = self.q.degree() as i64;
        self.out[u]
            .iter()
            .map(|&o| {
                let t = (self.q.idx(e) as i64 - self.q.idx(o) as i64).rem_euclid(deg);
                (if t > deg / 2 { t - deg } else { t }, o)
            })
            .min_by_key(|&(t, _)| t.abs())
    }

    /// Adds the lift of quad dart `e` at `u` with every geodesic through its far end and
    /// returns that end.
    pub fn insert_edge(&mut self, u: usize, e: usize) -> Result<usize> {
        if u >= self.num_vertices() || e >= self.q.surface.num_darts() || self.q.tail(e) != self.proj[u] {
            return Err(Error::Walk(format!("quad dart {e} does not leave cover vertex {u}")));
        }
        let mut stack: Vec<Pending> = Vec::new();
        let (mut u, mut e) = (u, e);
        let mut end = loop {
            if let Some(v) = self.opposite_vertex(u, e) {
                break v;
            }
            let v = self.add_vertex(self.q.head(e), self.dist[u] + 1);
            match self.turn(u, e) {
                Some((t, e1)) if t.abs() == 1 => {
                    // the square at the corner (e1, e) has its fourth vertex x at the
                    // distance of u, adjacent to the parent u1 and to v
                    let u1 = self.adj[u][&e1];
                    let (to_x, x_to_v) = if t == 1 {
                        (opp(self.q.phi(self.q.phi(e))), opp(self.q.phi(e)))
                    } else {
                        (self.q.phi(e1), self.q.phi(self.q.phi(e1)))
                    };
                    stack.push(Pending { u, e, v, u1, to_x, x_to_v });
                    (u, e) = (u1, to_x);
                }
                _ => {
                    self.add_edge(u, v, e);
                    break v;
                }
            }
        };
        while let Some(p) = stack.pop() {
            let x = self.adj[p.u1][&p.to_x];
            debug_assert_eq!(end, x);
            self.add_edge(x, p.v, p.x_to_v);
            self.add_edge(p.u, p.v, p.e);
            end = p.v;
        }
        Ok(end)
    }

    /// Lifts a quad walk from the root, saturating as it goes; returns the lifted vertices.
    pub fn trace_walk(&mut self, walk: &[usize]) -> Result<Vec<usize>> {
        check_walk(&self.q.surface, walk, false)?;
        let mut cur = self.root();
        let mut out = Vec::with_capacity(walk.len() + 1);
        out.push(cur);
        for &d in walk {
            cur = self.insert_edge(cur, d)?;
            out.push(cur);
        }
        Ok(out)
    }

    /// Vertices around the square to the right of the lift of `d` at `u`, when present.
    pub fn right_square(&self, u: usize, d: usize) -> Option<[usize; 4]> {
        let mut vs = [u; 4];
        let (mut cur, mut dart) = (u, d);
        for k in 0..4 {
            vs[k] = cur;
            cur = self.opposite_vertex(cur, dart)?;
            dart = self.q.phi(dart);
        }
        debug_assert_eq!(cur, u);
        Some(vs)
    }

    /// Present squares, each listed once by its vertex cycle starting at its least vertex.
    pub fn squares(&self) -> Vec<[usize; 4]> {
        let mut out = Vec::new();
        for u in 0..self.num_vertices() {
            for &d in self.adj[u].keys() {
                if let Some(vs) = self.right_square(u, d) {
                    if vs.iter().all(|&x| x >= u) {
                        out.push(vs);
                    }
                }
            }
        }
        out
    }

    pub fn stats(&self) -> CoverStats {
        let mut sides_on_squares = 0;
        let mut boundary = 0;
        for u in 0..self.num_vertices() {
            for &d in self.adj[u].keys() {
                if self.right_square(u, d).is_some() {
                    sides_on_squares += 1;
                } else {
                    boundary += 1;
                }
            }
        }
        debug_assert_eq!(sides_on_squares % 4, 0);
        CoverStats {
            vertices: self.num_vertices(),
            edges: self.num_edges(),
            faces: sides_on_squares / 4,
            boundary,
        }
    }

    /// Panics unless the star-shaped, out-degree and distance invariants hold.
    pub fn assert_invariants(&self) {
        assert!(self.out[0].is_empty() && self.dist[0] == 0);
        for u in 1..self.num_vertices() {
            let outs = &self.out[u];
            assert!(matches!(outs.len(), 1 | 2), "vertex {u} has out-degree {}", outs.len());
            for &o in outs {
                assert_eq!(self.dist[self.adj[u][&o]] + 1, self.dist[u]);
            }
            if let [a, b] = outs[..] {
                let deg = self.q.degree() as i64;
                let t = (self.q.idx(a) as i64 - self.q.idx(b) as i64).rem_euclid(deg);
                assert!(t == 1 || t == deg - 1, "parents of {u} do not share a square");
            }
            for (&d, &v) in &self.adj[u] {
                assert_eq!(self.dist[u].abs_diff(self.dist[v]), 1);
                assert_eq!(self.proj[v], self.q.head(d));
                assert_eq!(self.adj[v][&opp(d)], u);
            }
        }
    }
}

/// Result of the lift test: the first pair of times at which the lift revisits a vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LiftCheck {
    pub collision: Option<(usize, usize)>,
}

impl LiftCheck {
    pub fn is_simple(&self) -> bool {
        self.collision.is_none()
    }
}

/// The pairs `(v(k), w(k))` for `k = 0..=len`: the vertex of `g` reached after `k` steps
/// and the cover vertex reached by the image of that prefix.
pub fn lift_pairs(g: &Surface, q: &QuadSystem, c: &[usize]) -> Result<Vec<(usize, usize)>> {
    check_walk(g, c, false)?;
    let mut cover = StarShapedCover::new(q, 0);
    let mut cur = cover.root();
    let mut pairs = Vec::with_capacity(c.len() + 1);
    pairs.push((c.first().map_or(0, |&d| g.tail(d)), cur));
    for &d in c {
        if let Some([a, b]) = q.q(d) {
            cur = cover.insert_edge(cur, a)?;
            cur = cover.insert_edge(cur, b)?;
        }
        pairs.push((g.head(d), cur));
    }
    Ok(pairs)
}

/// Among repeated pairs, the collision `(k, k')` with the least `k'`, then least `k`.
pub fn first_collision(pairs: &[(usize, usize)]) -> Option<(usize, usize)> {
    let mut keyed: Vec<(usize, usize, usize)> = pairs.iter().enumerate().map(|(k, &(v, w))| (v, w, k)).collect();
    keyed.sort_unstable();
    keyed
        .windows(2)
        .filter(|p| (p[0].0, p[0].1) == (p[1].0, p[1].1))
        .map(|p| (p[0].2, p[1].2))
        .min_by_key(|&(a, b)| (b, a))
}

/// Whether the lift of the walk `c` to the universal cover visits no vertex twice.
pub fn has_simple_lift(g: &Surface, q: &QuadSystem, c: &[usize]) -> Result<LiftCheck> {
    Ok(LiftCheck { collision: first_collision(&lift_pairs(g, q, c)?) })
}

/// Whether the closed walk `c` lifts to a simple closed curve: the lift closes up and
/// visits no vertex twice before it does.
pub fn has_simple_closed_lift(g: &Surface, q: &QuadSystem, c: &[usize]) -> Result<bool> {
    check_walk(g, c, true)?;
    if c.is_empty() {
        return Ok(false);
    }
    let pairs = lift_pairs(g, q, c)?;
    Ok(pairs[c.len()] == pairs[0] && first_collision(&pairs[..c.len()]).is_none())
}

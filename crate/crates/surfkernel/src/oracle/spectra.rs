//! Bounded exhaustive search for the least crossing number in a free homotopy class.
//!
//! A dual dart `d` crosses edge `d` from its right face to its left face. Closed walks are
//! enumerated by increasing cost and compared to the target class by canonical word;
//! walks with a backtrack, cyclically included, are never minimal and are skipped.

use crate::curves::CurveSystem;
use crate::error::Result;
use crate::homotopy::{canonical_rep, CanonicalWord};
use crate::quad::QuadSystem;
use crate::surface::{opp, Surface};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Bounded {
    Exact(usize),
    /// No representative of cost at most `bound` was found, or the node budget ran out.
    Unknown { bound: usize },
}

impl Bounded {
    pub fn exact(self) -> Option<usize> {
        match self {
            Bounded::Exact(k) => Some(k),
            Bounded::Unknown { .. } => None,
        }
    }
}

/// A move from a face: the dual darts it appends and the face it reaches.
#[derive(Clone, Debug)]
struct Move {
    darts: Vec<usize>,
    to: usize,
}

struct Search<'a> {
    dual: &'a Surface,
    q: &'a QuadSystem,
    target: CanonicalWord,
    moves: Vec<Vec<Move>>,
    nodes: usize,
    budget: usize,
}

impl Search<'_> {
    fn run(&mut self, max_cost: usize) -> Result<Bounded> {
        if self.target.0.is_empty() {
            return Ok(Bounded::Exact(0));
        }
        for cost in 1..=max_cost {
            for start in 0..self.moves.len() {
                let mut walk = Vec::new();
                match self.dfs(start, start, cost, &mut walk)? {
                    Some(true) => return Ok(Bounded::Exact(cost)),
                    Some(false) => {}
                    None => return Ok(Bounded::Unknown { bound: max_cost }),
                }
            }
        }
        Ok(Bounded::Unknown { bound: max_cost })
    }

    /// `None` when the budget is exhausted.
    fn dfs(&mut self, start: usize, at: usize, left: usize, walk: &mut Vec<usize>) -> Result<Option<bool>> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Ok(None);
        }
        if left == 0 {
            if at != start || walk.first().map(|&d| opp(d)) == walk.last().copied() {
                return Ok(Some(false));
            }
            return Ok(Some(canonical_rep(self.dual, self.q, walk)? == self.target));
        }
        for i in 0..self.moves[at].len() {
            let m = &self.moves[at][i];
            if walk.last().map(|&d| opp(d)) == m.darts.first().copied() {
                continue;
            }
            let (to, n) = (m.to, m.darts.len());
            walk.extend_from_slice(&self.moves[at][i].darts);
            let found = self.dfs(start, to, left - 1, walk)?;
            walk.truncate(walk.len() - n);
            if found != Some(false) {
                return Ok(found);
            }
        }
        Ok(Some(false))
    }
}

fn crossing_moves(g: &Surface) -> Vec<Vec<Move>> {
    (0..g.num_faces())
        .map(|f| {
            let mut walk = g.face_walk(f);
            walk.sort_unstable();
            walk.into_iter().map(|d| Move { darts: vec![d], to: g.face(opp(d)) }).collect()
        })
        .collect()
}

/// Least number of crossings with the curves of `cs` of a closed curve freely homotopic
/// to the closed dual walk `c`, searching representatives of length up to `max_len`.
pub fn oracle_nu(cs: &CurveSystem, c: &[usize], max_len: usize, budget: usize) -> Result<Bounded> {
    nu_of_graph(&cs.surface, c, max_len, budget)
}

/// As [`oracle_nu`] for the edges of an arbitrary graph.
pub fn nu_of_graph(g: &Surface, c: &[usize], max_len: usize, budget: usize) -> Result<Bounded> {
    let dual = g.dual();
    let q = QuadSystem::build(&dual)?;
    let target = canonical_rep(&dual, &q, c)?;
    Search { dual: &dual, q: &q, target, moves: crossing_moves(g), nodes: 0, budget }.run(max_len)
}

/// Least number of intersections with the graph `g` of a closed curve freely homotopic to
/// the closed dual walk `c`, where passing through a vertex counts once.
///
/// Besides crossing an edge, a curve may leave a face through one of its corners and
/// enter any other corner at the same vertex; the dual walk of such a passage turns
/// counterclockwise around the vertex.
pub fn oracle_mu(g: &Surface, c: &[usize], max_len: usize, budget: usize) -> Result<Bounded> {
    let dual = g.dual();
    let q = QuadSystem::build(&dual)?;
    let target = canonical_rep(&dual, &q, c)?;
    let mut moves = crossing_moves(g);
    for f in 0..g.num_faces() {
        let mut corners = g.face_walk(f);
        corners.sort_unstable();
        for c0 in corners {
            let mut darts = vec![c0];
            let mut cur = g.sigma(c0);
            while cur != c0 {
                moves[f].push(Move { darts: darts.clone(), to: g.face(cur) });
                darts.push(cur);
                cur = g.sigma(cur);
            }
        }
    }
    Search { dual: &dual, q: &q, target, moves, nodes: 0, budget }.run(max_len)
}

/// Image in the dual of the medial system of a closed dual walk of `g`: crossing edge
/// `d` becomes a passage through medial vertex `d` between its two face-colored corners.
pub fn medial_dual_walk(m: &CurveSystem, walk: &[usize]) -> Vec<usize> {
    walk.iter().flat_map(|&d| [2 * d, m.surface.sigma(2 * d)]).collect()
}

//! Seeded random cellular embeddings and the filling curve systems they carry.
//!
//! Graphs grow from the one-vertex polygon gluing by edge subdivisions, face diagonals
//! and pendant edges, all of which keep the embedding cellular and the genus fixed.

use std::collections::VecDeque;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::curves::CurveSystem;
use crate::error::{Error, Result};
use crate::fixtures::standard;
use crate::medial::medial;
use crate::surface::{opp, Surface, NONE};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

struct Builder {
    rot: Vec<Vec<usize>>,
    edges: usize,
}

impl Builder {
    fn from(s: &Surface) -> Self {
        Builder { rot: s.rotations(), edges: s.num_edges() }
    }

    fn locate(&self, d: usize) -> (usize, usize) {
        for (v, r) in self.rot.iter().enumerate() {
            if let Some(i) = r.iter().position(|&x| x == d) {
                return (v, i);
            }
        }
        unreachable!("dart {d} not placed")
    }

    fn subdivide(&mut self, a: usize) {
        let m = self.edges;
        self.edges += 1;
        let (v, i) = self.locate(opp(a));
        self.rot[v][i] = 2 * m + 1;
        self.rot.push(vec![opp(a), 2 * m]);
    }

    /// Inserts a new dart right after `d` in the rotation at its tail.
    fn insert_after(&mut self, d: usize, x: usize) {
        let (v, i) = self.locate(d);
        self.rot[v].insert(i + 1, x);
    }

    fn chord(&mut self, after_a: usize, after_b: usize) {
        let m = self.edges;
        self.edges += 1;
        self.insert_after(after_a, 2 * m);
        self.insert_after(after_b, 2 * m + 1);
    }

    fn pendant(&mut self, after: usize) {
        let m = self.edges;
        self.edges += 1;
        self.insert_after(after, 2 * m);
        self.rot.push(vec![2 * m + 1]);
    }

    fn build(self) -> Result<Surface> {
        Surface::from_rotations(&self.rot)
    }
}

/// Random cellular embedding of genus `g` with exactly `edges` edges (at least `2g`).
pub fn random_surface(g: usize, edges: usize, rng: &mut impl Rng) -> Result<Surface> {
    if g == 0 {
        return Err(Error::Generate("genus must be positive".into()));
    }
    if edges < 2 * g {
        return Err(Error::Generate(format!("at least {} edges are needed on genus {g}", 2 * g)));
    }
    let mut cur = standard(g);
    while cur.num_edges() < edges {
        let mut b = Builder::from(&cur);
        let roll: f64 = rng.gen();
        if roll < 0.35 {
            let a = rng.gen_range(0..cur.num_darts());
            b.subdivide(a);
        } else if roll < 0.85 {
            let f = rng.gen_range(0..cur.num_faces());
            let walk = cur.face_walk(f);
            let i = walk[rng.gen_range(0..walk.len())];
            let j = walk[rng.gen_range(0..walk.len())];
            // the corner after dart d of the face sits between opp(d) and phi(d)
            b.chord(opp(i), opp(j));
        } else {
            let d = rng.gen_range(0..cur.num_darts());
            b.pendant(opp(d));
        }
        cur = b.build()?;
        debug_assert_eq!(cur.genus(), g);
    }
    relabel(&cur, rng)
}

/// Random relabeling of edges, dart orientations and vertices.
pub fn relabel(s: &Surface, rng: &mut impl Rng) -> Result<Surface> {
    let mut perm: Vec<usize> = (0..s.num_edges()).collect();
    perm.shuffle(rng);
    let flip: Vec<bool> = (0..s.num_edges()).map(|_| rng.gen()).collect();
    let map = |d: usize| 2 * perm[d / 2] + ((d & 1) ^ flip[d / 2] as usize);
    let mut rots: Vec<Vec<usize>> = s.rotations().into_iter().map(|r| r.into_iter().map(map).collect()).collect();
    rots.shuffle(rng);
    for r in rots.iter_mut() {
        let k = rng.gen_range(0..r.len());
        r.rotate_left(k);
    }
    let out = Surface::from_rotations(&rots)?;
    debug_assert_eq!(out.genus(), s.genus());
    Ok(out)
}

/// Filling curve system in general position with `n` crossings on genus `g`: the medial
/// of a random embedding with `n` edges.
pub fn random_system(g: usize, n: usize, seed: u64) -> Result<CurveSystem> {
    let mut r = rng(seed);
    let s = random_surface(g, n, &mut r)?;
    let cs = medial(&s);
    if !cs.is_filling(g) {
        return Err(Error::Generate("medial lost the genus".into()));
    }
    Ok(cs)
}

/// A closed walk: `len` random steps from vertex 0, closed by a shortest path home.
pub fn random_closed_walk(s: &Surface, len: usize, rng: &mut impl Rng) -> Vec<usize> {
    let mut walk = Vec::with_capacity(2 * len);
    let mut v = 0;
    for _ in 0..len {
        let r = s.rotation(v);
        let d = r[rng.gen_range(0..r.len())];
        walk.push(d);
        v = s.head(d);
    }
    walk.extend(shortest_path(s, v, 0));
    walk
}

/// Darts of a shortest path from `from` to `to`.
pub fn shortest_path(s: &Surface, from: usize, to: usize) -> Vec<usize> {
    let mut via = vec![NONE; s.num_vertices()];
    let mut seen = vec![false; s.num_vertices()];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        if u == to {
            break;
        }
        for d in s.rotation(u) {
            let w = s.head(d);
            if !seen[w] {
                seen[w] = true;
                via[w] = d;
                queue.push_back(w);
            }
        }
    }
    let mut path = Vec::new();
    let mut v = to;
    while v != from {
        let d = via[v];
        path.push(d);
        v = s.tail(d);
    }
    path.reverse();
    path
}

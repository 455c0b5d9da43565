//! Signed areas of contractible closed walks by a discrete Stokes formula.
//!
//! The reduced graph's counterclockwise facial walk `W` bounds a fundamental domain.
//! Two co-boundaries on its darts integrate to potentials along `W`; every dart of the
//! graph with the tree contracted is replaced by the boundary path to its right, and the
//! faces between the dart and that path are counted separately. Half-integers are kept
//! doubled throughout.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::quad::QuadSystem;
use crate::surface::{edge_of, opp, EdgeClass, Reduced, Surface, TreeCotree, NONE};

/// Co-boundaries on the darts of the reduced graph, each supported on one edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoBoundaryPair {
    pub omega: Vec<i64>,
    pub eta: Vec<i64>,
    /// Positions `i < j < k < l` on the facial walk with `W[k] = opp W[i]`, `W[l] = opp W[j]`.
    pub positions: [usize; 4],
}

/// The interleaved pair of reduced edges that comes first by `(i, j)`.
pub fn select_coboundaries(red: &Reduced) -> Result<CoBoundaryPair> {
    let w = &red.boundary;
    let m = w.len();
    let mut pos = vec![NONE; red.surface.num_darts()];
    for (t, &d) in w.iter().enumerate() {
        pos[d] = t;
    }
    for i in 0..m {
        let k = pos[opp(w[i])];
        if k < i {
            continue;
        }
        for j in i + 1..k {
            let l = pos[opp(w[j])];
            if l > k {
                let mut omega = vec![0; red.surface.num_darts()];
                let mut eta = vec![0; red.surface.num_darts()];
                omega[w[i]] = 1;
                omega[w[k]] = -1;
                eta[w[j]] = 1;
                eta[w[l]] = -1;
                return Ok(CoBoundaryPair { omega, eta, positions: [i, j, k, l] });
            }
        }
    }
    Err(Error::Invalid("facial walk has no interleaved pair of edges".into()))
}

/// `sum over i < j of omega(w_i) eta(w_j) - omega(w_j) eta(w_i)` along `walk`.
pub fn wedge(omega: &[i64], eta: &[i64], walk: &[usize]) -> i64 {
    let (mut so, mut se, mut acc) = (0, 0, 0);
    for &d in walk {
        acc += so * eta[d] - se * omega[d];
        so += omega[d];
        se += eta[d];
    }
    acc
}

/// Per-dart data of the graph with the tree contracted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DartArea {
    /// Faces between the dart and the boundary path to its right.
    pub area: i64,
    pub omega: i64,
    pub eta: i64,
    /// Twice the potential integral along the boundary path, from potential zero.
    pub i2: i64,
}

#[derive(Clone, Debug)]
pub struct AreaPrecomp {
    faces: i64,
    /// `None` for tree darts.
    darts: Vec<Option<DartArea>>,
    pair: CoBoundaryPair,
}

impl AreaPrecomp {
    pub fn new(g: &Surface) -> Result<Self> {
        let tc = g.tree_cotree();
        let red = g.reduce(&tc)?;
        precompute(g, &tc, &red)
    }

    pub fn num_faces(&self) -> usize {
        self.faces as usize
    }
    pub fn dart(&self, d: usize) -> Option<DartArea> {
        self.darts[d]
    }
    pub fn coboundaries(&self) -> &CoBoundaryPair {
        &self.pair
    }

    /// Signed area of a closed walk, rejected unless contractible.
    pub fn signed_area(&self, g: &Surface, q: &QuadSystem, c: &[usize]) -> Result<i64> {
        if !crate::homotopy::is_contractible(g, q, c)? {
            return Err(Error::NotContractible);
        }
        Ok(self.area_of_contractible(c))
    }

    /// Signed area of a walk already known to be closed and contractible.
    pub fn area_of_contractible(&self, c: &[usize]) -> i64 {
        let (mut dom2, mut area, mut alpha) = (0i64, 0i64, 0i64);
        for &d in c {
            if let Some(x) = self.darts[d] {
                dom2 += x.i2 + 2 * alpha * x.eta;
                area += x.area;
                alpha += x.omega;
            }
        }
        debug_assert_eq!(alpha, 0);
        debug_assert_eq!(dom2 % 2, 0, "reduced area is an integer");
        dom2 / 2 * self.faces - area
    }
}

/// Sizes of the subtrees of the dual cotree rooted at face 0, with each face's parent edge.
fn cotree_subtrees(g: &Surface, tc: &TreeCotree) -> (Vec<i64>, Vec<usize>) {
    let nf = g.num_faces();
    let mut parent_edge = vec![NONE; nf];
    let mut seen = vec![false; nf];
    let mut order = Vec::with_capacity(nf);
    seen[0] = true;
    let mut queue = VecDeque::from([0]);
    while let Some(f) = queue.pop_front() {
        order.push(f);
        for d in g.face_walk(f) {
            if tc.class[edge_of(d)] != EdgeClass::Cotree {
                continue;
            }
            let h = g.face(opp(d));
            if !seen[h] {
                seen[h] = true;
                parent_edge[h] = edge_of(d);
                queue.push_back(h);
            }
        }
    }
    let mut size = vec![1i64; nf];
    for &f in order.iter().rev() {
        if f != 0 {
            let e = parent_edge[f];
            let d = 2 * e;
            let p = if g.face(d) == f { g.face(opp(d)) } else { g.face(d) };
            size[p] += size[f];
        }
    }
    (size, parent_edge)
}

pub fn precompute(g: &Surface, tc: &TreeCotree, red: &Reduced) -> Result<AreaPrecomp> {
    if g.genus() < 2 {
        return Err(Error::LowGenus(g.genus()));
    }
    let pair = select_coboundaries(red)?;
    let w = &red.boundary;
    let m = w.len();
    let mut pos_w = vec![NONE; red.surface.num_darts()];
    for (t, &d) in w.iter().enumerate() {
        pos_w[d] = t;
    }
    // alpha[t], beta[t]: potentials at the t-th corner; i2[t]: doubled integral to it
    let mut alpha = vec![0i64; m + 1];
    let mut beta = vec![0i64; m + 1];
    let mut i2 = vec![0i64; m + 1];
    for t in 0..m {
        let (o, e) = (pair.omega[w[t]], pair.eta[w[t]]);
        alpha[t + 1] = alpha[t] + o;
        beta[t + 1] = beta[t] + e;
        i2[t + 1] = i2[t] + (alpha[t] + alpha[t + 1]) * e;
    }
    debug_assert_eq!((alpha[m], beta[m]), (0, 0));
    let at = |t: usize| -> (i64, i64, i64) {
        if t <= m {
            (alpha[t], beta[t], i2[t])
        } else {
            (alpha[t - m], beta[t - m], i2[m] + i2[t - m])
        }
    };
    // boundary path from corner i to corner j >= i, from potential zero
    let path = |i: usize, j: usize| -> (i64, i64, i64) {
        let (ai, bi, ii) = at(i);
        let (aj, bj, ij) = at(j);
        (aj - ai, bj - bi, ij - ii - 2 * ai * (bj - bi))
    };

    // corner of each non-tree dart: the position in W of the leftover dart opening its gap
    let n = red.order.len();
    let first_l = red
        .order
        .iter()
        .position(|&d| tc.class[edge_of(d)] == EdgeClass::Leftover)
        .expect("leftover edges exist in positive genus");
    let mut corner = vec![NONE; g.num_darts()];
    let mut rel = vec![NONE; g.num_darts()];
    let mut cur = NONE;
    let mut cur_start = 0;
    for k in 0..n {
        let d = red.order[(first_l + k) % n];
        if tc.class[edge_of(d)] == EdgeClass::Leftover {
            cur = pos_w[red.to_reduced_dart(d)];
            cur_start = k;
        }
        corner[d] = cur;
        rel[d] = k - cur_start;
    }

    let (size, parent_edge) = cotree_subtrees(g, tc);
    let faces = g.num_faces() as i64;
    let darts = (0..g.num_darts())
        .map(|d| match tc.class[edge_of(d)] {
            EdgeClass::Tree => None,
            EdgeClass::Leftover => {
                let t = pos_w[red.to_reduced_dart(d)];
                let (omega, eta, i2) = path(t, t + 1);
                Some(DartArea { area: 0, omega, eta, i2 })
            }
            EdgeClass::Cotree => {
                let (i, j0) = (corner[d], corner[opp(d)]);
                let j = if j0 > i {
                    j0
                } else if j0 < i {
                    j0 + m
                } else if rel[d] < rel[opp(d)] {
                    // a loop chord opening counterclockwise keeps the whole boundary on its right
                    i + m
                } else {
                    i
                };
                let (omega, eta, i2) = path(i, j);
                let right = g.face(d);
                let area = if parent_edge[right] == edge_of(d) { size[right] } else { faces - size[g.face(opp(d))] };
                Some(DartArea { area, omega, eta, i2 })
            }
        })
        .collect();
    Ok(AreaPrecomp { faces, darts, pair })
}

/// Counterclockwise boundary walk of face `f`: the reversed face walk, darts flipped.
pub fn ccw_face_walk(g: &Surface, f: usize) -> Vec<usize> {
    g.face_walk(f).iter().rev().map(|&d| opp(d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::standard;
    use crate::generate::{random_closed_walk, random_surface, rng};
    use proptest::prelude::*;
    use rand::Rng;

    fn naive_wedge(omega: &[i64], eta: &[i64], w: &[usize]) -> i64 {
        let mut s = 0;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                s += omega[w[i]] * eta[w[j]] - omega[w[j]] * eta[w[i]];
            }
        }
        s
    }

    #[test]
    fn standard_pair_and_wedge() {
        let g = standard(2);
        let red = g.reduce(&g.tree_cotree()).unwrap();
        let p = select_coboundaries(&red).unwrap();
        let w = &red.boundary;
        assert_eq!(p.positions[0], 0);
        assert_eq!(p.positions[1], 1);
        assert_eq!(w[p.positions[2]], opp(w[0]));
        assert_eq!(naive_wedge(&p.omega, &p.eta, w), 2);
        assert_eq!(wedge(&p.omega, &p.eta, w), 2);
        assert_eq!(wedge(&p.eta, &p.omega, w), -2);
        assert_eq!(wedge(&p.omega, &p.omega, w), 0);
        let zero = vec![0; p.eta.len()];
        assert_eq!(wedge(&p.omega, &zero, w), 0);
        for k in 0..w.len() {
            let mut r = w.clone();
            r.rotate_left(k);
            assert_eq!(wedge(&p.omega, &p.eta, &r), 2);
        }
    }

    #[test]
    fn faces_have_unit_area() {
        let mut r = rng(11);
        for g in [2, 3] {
            let s = random_surface(g, 20, &mut r).unwrap();
            let q = QuadSystem::build(&s).unwrap();
            let pre = AreaPrecomp::new(&s).unwrap();
            assert_eq!(pre.signed_area(&s, &q, &[]).unwrap(), 0);
            for f in 0..s.num_faces() {
                assert_eq!(pre.signed_area(&s, &q, &ccw_face_walk(&s, f)).unwrap(), 1);
                assert_eq!(pre.signed_area(&s, &q, &s.face_walk(f)).unwrap(), -1);
            }
        }
    }

    #[test]
    fn per_dart_identities() {
        let mut r = rng(5);
        let s = random_surface(2, 24, &mut r).unwrap();
        let tc = s.tree_cotree();
        let red = s.reduce(&tc).unwrap();
        let pre = precompute(&s, &tc, &red).unwrap();
        for d in 0..s.num_darts() {
            match tc.class[edge_of(d)] {
                EdgeClass::Tree => assert!(pre.dart(d).is_none()),
                EdgeClass::Leftover => {
                    let x = pre.dart(d).unwrap();
                    assert_eq!(x.area, 0);
                    assert_eq!(x.i2, x.omega * x.eta);
                    let rd = red.to_reduced_dart(d);
                    assert_eq!((x.omega, x.eta), (pre.pair.omega[rd], pre.pair.eta[rd]));
                }
                EdgeClass::Cotree => {
                    let (x, y) = (pre.dart(d).unwrap(), pre.dart(opp(d)).unwrap());
                    assert_eq!(x.area + y.area, s.num_faces() as i64);
                    assert!(x.area >= 1 && y.area >= 1);
                    assert_eq!(x.omega, -y.omega);
                    assert_eq!(x.eta, -y.eta);
                }
            }
        }
    }

    #[test]
    fn non_contractible_is_rejected() {
        let g = standard(2);
        let q = QuadSystem::build(&g).unwrap();
        let pre = AreaPrecomp::new(&g).unwrap();
        assert_eq!(pre.signed_area(&g, &q, &[0]), Err(Error::NotContractible));
        assert!(pre.signed_area(&g, &q, &[0, 2]).is_err());
    }

    /// The surface with the tree contracted, and the dart renaming into it.
    fn contract_tree(s: &Surface) -> (Surface, Vec<usize>) {
        let tc = s.tree_cotree();
        let red = s.reduce(&tc).unwrap();
        let mut new_edge = vec![NONE; s.num_edges()];
        let mut k = 0;
        for e in 0..s.num_edges() {
            if tc.class[e] != EdgeClass::Tree {
                new_edge[e] = k;
                k += 1;
            }
        }
        let map: Vec<usize> =
            (0..s.num_darts()).map(|d| if new_edge[d / 2] == NONE { NONE } else { 2 * new_edge[d / 2] + (d & 1) }).collect();
        let rot: Vec<usize> = red.order.iter().map(|&d| map[d]).collect();
        (Surface::from_rotations(&[rot]).unwrap(), map)
    }

    /// A contractible walk: random loops with their reversals and face detours spliced in.
    fn contractible_walk(s: &Surface, r: &mut impl Rng) -> Vec<usize> {
        let w = random_closed_walk(s, r.gen_range(1..8), r);
        let mut c = w.clone();
        for _ in 0..r.gen_range(0..4) {
            let at = r.gen_range(0..=c.len());
            let v = if at == c.len() { s.head(*c.last().unwrap()) } else { s.tail(c[at]) };
            let d = s.rotation(v)[r.gen_range(0..s.degree(v))];
            let mut face = ccw_face_walk(s, s.face(opp(d)));
            if r.gen() {
                face = s.face_walk(s.face(d));
            }
            let p = face.iter().position(|&x| x == d).unwrap_or(0);
            face.rotate_left(p);
            if s.tail(face[0]) == v {
                c.splice(at..at, face);
            }
        }
        c.extend(w.iter().rev().map(|&d| opp(d)));
        c
    }

    proptest! {
        #[test]
        fn stokes_moves(seed in 0u64..400) {
            let mut r = rng(seed);
            let s = random_surface(2 + (seed % 2) as usize, 14 + (seed % 11) as usize, &mut r).unwrap();
            let q = QuadSystem::build(&s).unwrap();
            let pre = AreaPrecomp::new(&s).unwrap();
            let c = contractible_walk(&s, &mut r);
            let a = pre.signed_area(&s, &q, &c).unwrap();
            // reversal negates
            let rev: Vec<usize> = c.iter().rev().map(|&d| opp(d)).collect();
            prop_assert_eq!(pre.signed_area(&s, &q, &rev).unwrap(), -a);
            if c.is_empty() {
                return Ok(());
            }
            // spur insertion and ccw face insertion at a random position
            let at = r.gen_range(0..c.len());
            let v = s.tail(c[at]);
            let d = s.rotation(v)[r.gen_range(0..s.degree(v))];
            let mut spur = c.clone();
            spur.splice(at..at, [d, opp(d)]);
            prop_assert_eq!(pre.signed_area(&s, &q, &spur).unwrap(), a);
            let mut face = ccw_face_walk(&s, s.face(opp(d)));
            let p = face.iter().position(|&x| x == d).unwrap();
            face.rotate_left(p);
            let mut plus = c.clone();
            plus.splice(at..at, face);
            prop_assert_eq!(pre.signed_area(&s, &q, &plus).unwrap(), a + 1);
            // rotation of a closed walk keeps its area
            let mut rot = c.clone();
            rot.rotate_left(at);
            prop_assert_eq!(pre.signed_area(&s, &q, &rot).unwrap(), a);
            // the area survives contracting the tree
            let (sp, map) = contract_tree(&s);
            let cp: Vec<usize> = c.iter().map(|&d| map[d]).filter(|&d| d != NONE).collect();
            let prep = AreaPrecomp::new(&sp).unwrap();
            prop_assert_eq!(prep.area_of_contractible(&cp), a);
        }
    }
}

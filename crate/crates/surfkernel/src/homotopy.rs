//! Contractibility and free homotopy of closed walks through their images in the quads.

use std::collections::BTreeMap;

use crate::error::Result;
use crate::geodesic::GeodesicForm;
use crate::quad::{check_walk, QuadSystem};
use crate::surface::{opp, Surface};

/// Cyclic word over the darts of the quad system, letters `1..=8g`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalWord(pub Vec<u32>);

impl std::fmt::Display for CanonicalWord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

pub fn is_contractible(g: &Surface, q: &QuadSystem, walk: &[usize]) -> Result<bool> {
    check_walk(g, walk, true)?;
    Ok(GeodesicForm::from_darts(q, &q.project(walk)).is_empty())
}

fn cyclic_turns(q: &QuadSystem, w: &[usize]) -> Vec<i64> {
    let m = w.len();
    (0..m).map(|i| q.turn(w[(i + m - 1) % m], w[i])).collect()
}

/// A closed geodesic freely homotopic to the closed quad walk `darts`.
pub fn cyclic_reduce(q: &QuadSystem, darts: &[usize]) -> Vec<usize> {
    let mut w = GeodesicForm::from_darts(q, darts).to_darts(q);
    'outer: loop {
        let m = w.len();
        if m == 0 {
            return w;
        }
        // t[i] sits between w[i - 1] and w[i]
        let t = cyclic_turns(q, &w);
        if let Some(i) = t.iter().position(|&x| x == 0) {
            w.rotate_left((i + m - 1) % m);
            w.drain(0..2);
            continue;
        }
        for i in 0..m {
            let s = t[i];
            if s.abs() != 1 {
                continue;
            }
            let mut k = 0;
            while k < m && t[(i + 1 + k) % m] == 2 * s {
                k += 1;
            }
            if k + 3 <= m && t[(i + 1 + k) % m] == s {
                w.rotate_left((i + m - 1) % m);
                let mut b = q.rot(w[0], -s);
                let mut bottom = vec![b];
                for _ in 0..k {
                    b = q.next_with_turn(b, -2 * s);
                    bottom.push(b);
                }
                w.splice(0..k + 3, bottom);
                continue 'outer;
            }
        }
        // one corner of sign s and every other turn 2s: the walk hugs a strip of quads
        // that closes up, and the far side of the strip is shorter by two
        let ones: Vec<usize> = (0..m).filter(|&i| t[i].abs() == 1).collect();
        if ones.len() == 1 && m >= 2 {
            let i0 = ones[0];
            let s = t[i0];
            if (0..m).all(|i| i == i0 || t[i] == 2 * s) {
                w = (0..m - 2)
                    .map(|k| {
                        let d = w[(i0 + 1 + k) % m];
                        if s > 0 {
                            opp(q.phi(q.phi(d)))
                        } else {
                            q.phi(q.phi(opp(d)))
                        }
                    })
                    .collect();
                continue 'outer;
            }
        }
        return w;
    }
}

/// The rightmost closed geodesic in the free homotopy class of `darts`.
pub fn canonical_closed(q: &QuadSystem, darts: &[usize]) -> Vec<usize> {
    let mut w = cyclic_reduce(q, darts);
    let m = w.len();
    if m == 0 {
        return w;
    }
    let limit = 16 * (m + 4) * (m + 4);
    let mut guard = 0;
    loop {
        let t = cyclic_turns(q, &w);
        let Some(i) = t.iter().position(|&x| x == 1) else { break };
        let a = w[(i + m - 1) % m];
        let p2 = q.phi(q.phi(a));
        w[(i + m - 1) % m] = opp(q.phi(p2));
        w[i] = opp(p2);
        guard += 1;
        assert!(guard < limit, "right flips do not terminate");
    }
    let t = cyclic_turns(q, &w);
    if t.iter().all(|&x| x == 2) {
        w = w.iter().map(|&d| opp(q.phi(q.phi(d)))).collect();
    }
    w
}

/// Lexicographically least rotation, by Booth's algorithm.
pub fn least_cyclic_rotation<T: Ord + Clone>(word: &[T]) -> Vec<T> {
    let n = word.len();
    if n == 0 {
        return Vec::new();
    }
    let at = |i: usize| &word[i % n];
    let mut fail: Vec<isize> = vec![-1; 2 * n];
    let mut k: usize = 0;
    for j in 1..2 * n {
        let mut i = fail[j - k - 1];
        while i != -1 && at(j) != at(k + i as usize + 1) {
            if at(j) < at(k + i as usize + 1) {
                k = j - i as usize - 1;
            }
            i = fail[i as usize];
        }
        if i == -1 && at(j) != at(k) {
            if at(j) < at(k) {
                k = j;
            }
            fail[j - k] = -1;
        } else {
            fail[j - k] = i + 1;
        }
    }
    (0..n).map(|i| at(k + i).clone()).collect()
}

fn word_of(q: &QuadSystem, quad_darts: &[usize]) -> Vec<u32> {
    let w = canonical_closed(q, quad_darts);
    least_cyclic_rotation(&w.iter().map(|&d| d as u32 + 1).collect::<Vec<_>>())
}

/// Canonical word of the unoriented free homotopy class of a closed walk; empty when
/// the walk is contractible.
pub fn canonical_rep(g: &Surface, q: &QuadSystem, walk: &[usize]) -> Result<CanonicalWord> {
    check_walk(g, walk, true)?;
    let fwd = q.project(walk);
    let rev: Vec<usize> = fwd.iter().rev().map(|&d| opp(d)).collect();
    Ok(CanonicalWord(word_of(q, &fwd).min(word_of(q, &rev))))
}

#[derive(Default)]
struct Trie {
    children: Vec<BTreeMap<u32, usize>>,
    count: Vec<usize>,
}

impl Trie {
    fn new() -> Self {
        Trie { children: vec![BTreeMap::new()], count: vec![0] }
    }

    fn insert(&mut self, word: &[u32]) {
        let mut node = 0;
        for &c in word {
            node = match self.children[node].get(&c) {
                Some(&n) => n,
                None => {
                    let n = self.count.len();
                    self.children.push(BTreeMap::new());
                    self.count.push(0);
                    self.children[node].insert(c, n);
                    n
                }
            };
        }
        self.count[node] += 1;
    }

    fn same(&self, a: usize, other: &Trie, b: usize) -> bool {
        self.count[a] == other.count[b]
            && self.children[a].len() == other.children[b].len()
            && self.children[a]
                .iter()
                .zip(&other.children[b])
                .all(|((ca, na), (cb, nb))| ca == cb && self.same(*na, other, *nb))
    }
}

/// Compares two multisets of canonical words.
pub fn same_multiset(a: &[CanonicalWord], b: &[CanonicalWord]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut ta = Trie::new();
    let mut tb = Trie::new();
    for w in a {
        ta.insert(&w.0);
    }
    for w in b {
        tb.insert(&w.0);
    }
    ta.same(0, &tb, 0)
}

/// True when the two systems of closed walks agree up to free homotopy and orientation
/// of each curve, counted with multiplicity.
pub fn systems_homotopic_up_to_orientation(
    g: &Surface,
    q: &QuadSystem,
    a: &[Vec<usize>],
    b: &[Vec<usize>],
) -> Result<bool> {
    if a.len() != b.len() {
        return Ok(false);
    }
    let wa = a.iter().map(|c| canonical_rep(g, q, c)).collect::<Result<Vec<_>>>()?;
    let wb = b.iter().map(|c| canonical_rep(g, q, c)).collect::<Result<Vec<_>>>()?;
    Ok(same_multiset(&wa, &wb))
}

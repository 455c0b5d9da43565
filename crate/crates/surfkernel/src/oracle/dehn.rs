//! Word problem in the fundamental group of a closed surface by Dehn's algorithm.
//!
//! The one-vertex one-face reduced graph gives a presentation with `2g` generators and a
//! single relator of length `4g` in which every letter and its inverse occur once. A
//! piece common to two cyclic conjugates of the relator would force a degree-2 vertex,
//! so pieces have length 1 and the presentation is C'(1/6) for `g >= 2`. Dehn's algorithm
//! is then a complete decision procedure: a nonempty freely reduced trivial word always
//! contains more than half of a cyclic conjugate of the relator or its inverse.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::surface::{edge_of, opp, EdgeClass, Surface, NONE};

/// A word over the reduced darts; the inverse of letter `x` is `opp(x)`.
pub type Word = Vec<usize>;

pub fn inverse(w: &[usize]) -> Word {
    w.iter().rev().map(|&x| opp(x)).collect()
}

pub fn free_reduce(w: &[usize]) -> Word {
    let mut out: Word = Vec::with_capacity(w.len());
    for &x in w {
        if out.last() == Some(&opp(x)) {
            out.pop();
        } else {
            out.push(x);
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct Presentation {
    genus: usize,
    relator: Word,
    /// Position of each letter in the relator and in its inverse.
    pos: [Vec<usize>; 2],
    /// Group element carried by each dart of the source surface, with the spanning tree
    /// as the system of base paths.
    dart_words: Vec<Word>,
}

impl Presentation {
    pub fn new(s: &Surface) -> Result<Self> {
        if s.genus() < 2 {
            return Err(Error::LowGenus(s.genus()));
        }
        let tc = s.tree_cotree();
        let red = s.reduce(&tc)?;
        let relator = red.boundary.clone();
        let n = relator.len();
        let mut pos = [vec![NONE; n], vec![NONE; n]];
        for (i, &x) in relator.iter().enumerate() {
            pos[0][x] = i;
        }
        for x in 0..n {
            pos[1][x] = n - 1 - pos[0][opp(x)];
        }
        let mut dart_words: Vec<Option<Word>> = (0..s.num_darts())
            .map(|d| match tc.class[edge_of(d)] {
                EdgeClass::Tree => Some(Vec::new()),
                EdgeClass::Leftover => Some(vec![red.to_reduced_dart(d)]),
                EdgeClass::Cotree => None,
            })
            .collect();
        // peel the dual cotree from its leaves: each face relation determines the word
        // of the cotree edge towards the root
        let mut parent = vec![NONE; s.num_faces()];
        let mut order = Vec::with_capacity(s.num_faces());
        let mut seen = vec![false; s.num_faces()];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(f) = queue.pop_front() {
            order.push(f);
            let mut walk = s.face_walk(f);
            walk.sort_unstable();
            for d in walk {
                let h = s.face(opp(d));
                if tc.class[edge_of(d)] == EdgeClass::Cotree && !seen[h] {
                    seen[h] = true;
                    parent[h] = opp(d);
                    queue.push_back(h);
                }
            }
        }
        let mut pres = Presentation { genus: s.genus(), relator, pos, dart_words: Vec::new() };
        for &f in order.iter().skip(1).rev() {
            let p = parent[f];
            let walk = s.face_walk(f);
            let at = walk.iter().position(|&d| d == p).expect("parent dart bounds its face");
            let mut rest = Vec::new();
            for k in 1..walk.len() {
                let d = walk[(at + k) % walk.len()];
                rest.extend(dart_words[d].as_ref().expect("children are peeled first"));
            }
            let rest = pres.reduce(&rest);
            dart_words[p] = Some(inverse(&rest));
            dart_words[opp(p)] = Some(rest);
        }
        pres.dart_words = dart_words.into_iter().map(|w| w.expect("every dart has a word")).collect();
        Ok(pres)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }
    pub fn relator(&self) -> &[usize] {
        &self.relator
    }
    pub fn dart_word(&self, d: usize) -> &[usize] {
        &self.dart_words[d]
    }

    /// Concatenated word of a walk.
    pub fn walk_word(&self, walk: &[usize]) -> Word {
        walk.iter().flat_map(|&d| self.dart_words[d].iter().copied()).collect()
    }

    /// Longest run of `w` starting at `i` that follows a cyclic conjugate of the relator
    /// (`side = 0`) or its inverse (`side = 1`).
    fn run_at(&self, w: &[usize], i: usize, side: usize) -> (usize, usize) {
        let n = self.relator.len();
        let p = self.pos[side][w[i]];
        let letter = |k: usize| {
            let j = (p + k) % n;
            if side == 0 {
                self.relator[j]
            } else {
                opp(self.relator[n - 1 - j])
            }
        };
        let mut len = 0;
        while len < n && i + len < w.len() && w[i + len] == letter(len) {
            len += 1;
        }
        (p, len)
    }

    /// Dehn reduction: the result is empty iff the word is trivial in the group.
    pub fn reduce(&self, w: &[usize]) -> Word {
        let n = self.relator.len();
        let mut w = free_reduce(w);
        'outer: loop {
            for i in 0..w.len() {
                for side in 0..2 {
                    let (p, len) = self.run_at(&w, i, side);
                    if 2 * len > n {
                        // u v = 1 around the relator, so u is replaced by v^-1
                        let rel = |j: usize| {
                            let j = j % n;
                            if side == 0 {
                                self.relator[j]
                            } else {
                                opp(self.relator[n - 1 - j])
                            }
                        };
                        let v: Word = (len..n).map(|k| rel(p + k)).collect();
                        let mut next = w[..i].to_vec();
                        next.extend(inverse(&v));
                        next.extend_from_slice(&w[i + len..]);
                        w = free_reduce(&next);
                        continue 'outer;
                    }
                }
            }
            return w;
        }
    }

    pub fn is_trivial(&self, w: &[usize]) -> bool {
        self.reduce(w).is_empty()
    }

    pub fn equal(&self, a: &[usize], b: &[usize]) -> bool {
        let mut w = a.to_vec();
        w.extend(inverse(b));
        self.is_trivial(&w)
    }

    /// Image in the abelianization `Z^{2g}`, indexed by reduced edge.
    pub fn abelian(&self, w: &[usize]) -> Vec<i32> {
        let mut v = vec![0; self.relator.len() / 2];
        for &x in w {
            v[edge_of(x)] += if x & 1 == 0 { 1 } else { -1 };
        }
        v
    }
}

/// Interns group elements tagged by a small integer label, deciding equality by Dehn
/// reduction inside buckets of equal label and abelian image.
#[derive(Clone, Debug, Default)]
pub struct ElementTable {
    buckets: std::collections::HashMap<(usize, Vec<i32>), Vec<(Word, usize)>>,
    len: usize,
}

impl ElementTable {
    /// Id of `(label, w)`, creating it when new; the flag tells whether it was created.
    pub fn intern(&mut self, pres: &Presentation, label: usize, w: &[usize]) -> (usize, bool) {
        let bucket = self.buckets.entry((label, pres.abelian(w))).or_default();
        if let Some(&(_, id)) = bucket.iter().find(|(u, _)| pres.equal(u, w)) {
            return (id, false);
        }
        let id = self.len;
        self.len += 1;
        bucket.push((w.to_vec(), id));
        (id, true)
    }

    pub fn len(&self) -> usize {
        self.len
    }
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }
}

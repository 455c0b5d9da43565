//! Equality of μ-spectra of two minors of a common graph.
//!
//! Two minors share a μ-spectrum exactly when the medials of their kernels are freely
//! homotopic up to orientation. Each kernel is computed by smoothing the medial of the
//! common graph, so every kernel curve lifts to a closed walk in that medial through
//! the edge lineage kept by the smoothings, and both systems are compared there.

use crate::bigon::{smoothing_minimal, SearchConfig};
use crate::curves::{CurveSystem, SmoothMap};
use crate::error::{Error, Result};
use crate::homotopy::{canonical_rep, same_multiset, CanonicalWord};
use crate::medial::medial;
use crate::minor::{smooth_ops, MinorOp};
use crate::quad::QuadSystem;
use crate::surface::Surface;

/// Closed walks, one per curve.
pub type Curves = Vec<Vec<usize>>;

/// Where each dual dart of a root system goes in the dual of a smoothed system.
///
/// Dart `d` of the dual crosses edge `d` from its right face to its left face; smoothing
/// keeps the side of every surviving strand, so composing dart maps maps dual walks to
/// freely homotopic dual walks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualEdgeMap {
    map: Vec<usize>,
}

impl DualEdgeMap {
    pub fn identity(num_darts: usize) -> Self {
        DualEdgeMap { map: (0..num_darts).collect() }
    }

    pub fn then(&mut self, step: &SmoothMap) {
        for d in &mut self.map {
            *d = step.dart_map[*d];
        }
    }

    pub fn image(&self, d: usize) -> usize {
        self.map[d]
    }

    pub fn apply(&self, walk: &[usize]) -> Vec<usize> {
        walk.iter().map(|&d| self.map[d]).collect()
    }
}

/// Medial of `g` with the quad system used to compare classes on it.
pub struct SpectrumContext {
    pub graph: Surface,
    pub medial: CurveSystem,
    pub quads: QuadSystem,
    pub cfg: SearchConfig,
}

impl SpectrumContext {
    pub fn new(g: &Surface, cfg: SearchConfig) -> Result<Self> {
        if g.genus() < 2 {
            return Err(Error::LowGenus(g.genus()));
        }
        let m = medial(g);
        let quads = QuadSystem::build(&m.surface)?;
        Ok(SpectrumContext { graph: g.clone(), medial: m, quads, cfg })
    }

    /// Curves of the medial of a kernel of the minor, as closed walks in the medial of
    /// the common graph.
    pub fn kernel_curves(&self, ops: &[MinorOp]) -> Result<Curves> {
        let (h, _) = smooth_ops(&self.medial, &self.graph, ops)?;
        let run = smoothing_minimal(&h, self.cfg)?;
        Ok(run.system.curves().iter().map(|c| run.system.lift_walk(c)).collect())
    }

    /// Sorted canonical words of the kernel curves.
    pub fn classes(&self, curves: &[Vec<usize>]) -> Result<Vec<CanonicalWord>> {
        let mut words =
            curves.iter().map(|c| canonical_rep(&self.medial.surface, &self.quads, c)).collect::<Result<Vec<_>>>()?;
        words.sort();
        Ok(words)
    }

    pub fn equal(&self, ops_a: &[MinorOp], ops_b: &[MinorOp]) -> Result<bool> {
        let (a, b) = self.kernel_pair(ops_a, ops_b)?;
        if a.len() != b.len() {
            return Ok(false);
        }
        Ok(same_multiset(&self.classes(&a)?, &self.classes(&b)?))
    }

    fn kernel_pair(&self, ops_a: &[MinorOp], ops_b: &[MinorOp]) -> Result<(Curves, Curves)> {
        #[cfg(feature = "parallel")]
        if self.cfg.parallel {
            let (a, b) = rayon::join(|| self.kernel_curves(ops_a), || self.kernel_curves(ops_b));
            return Ok((a?, b?));
        }
        Ok((self.kernel_curves(ops_a)?, self.kernel_curves(ops_b)?))
    }
}

/// True when the minors of `g` given by the two operation lists have the same μ-spectrum.
pub fn mu_spectra_equal(g: &Surface, ops_a: &[MinorOp], ops_b: &[MinorOp]) -> Result<bool> {
    SpectrumContext::new(g, SearchConfig::default())?.equal(ops_a, ops_b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::standard;
    use crate::generate::{random_surface, rng};
    use crate::homotopy::is_contractible;
    use crate::minor::{apply_minor_ops, minor_kernel};

    /// A deletion or contraction of a kernel edge that the cellular representation admits.
    fn breaking_op(k: &Surface, edges: &[usize]) -> Option<MinorOp> {
        (0..k.num_edges()).find_map(|e| {
            let d = 2 * e;
            if k.face(d) != k.face(d ^ 1) {
                Some(MinorOp::Delete(edges[e]))
            } else if k.tail(d) != k.head(d) {
                Some(MinorOp::Contract(edges[e]))
            } else {
                None
            }
        })
    }

    /// Up to `k` pairwise distinct essential classes among the shortest closed walks.
    fn short_classes(s: &Surface, k: usize) -> Vec<Vec<usize>> {
        let q = QuadSystem::build(s).unwrap();
        let mut seen = Vec::new();
        let mut out = Vec::new();
        for len in 1..=6 {
            for v in 0..s.num_vertices() {
                let mut stack: Vec<Vec<usize>> = s.rotation(v).into_iter().map(|d| vec![d]).collect();
                while let Some(w) = stack.pop() {
                    let end = s.head(*w.last().unwrap());
                    if w.len() == len {
                        if end != v || w[0] == (w[len - 1] ^ 1) {
                            continue;
                        }
                        let c = canonical_rep(s, &q, &w).unwrap();
                        if !c.0.is_empty() && !seen.contains(&c) {
                            seen.push(c);
                            out.push(w);
                            if out.len() == k {
                                return out;
                            }
                        }
                        continue;
                    }
                    for d in s.rotation(end) {
                        if d != (w[w.len() - 1] ^ 1) {
                            let mut x = w.clone();
                            x.push(d);
                            stack.push(x);
                        }
                    }
                }
            }
        }
        out
    }

    #[test]
    fn dual_maps_preserve_crossing_numbers() {
        use crate::bigon::smoothing_minimal;
        use crate::oracle::oracle_nu;
        let mut checked = 0;
        for seed in 0..4 {
            let m = medial(&random_surface(2, 6, &mut rng(seed)).unwrap());
            let run = smoothing_minimal(&m, SearchConfig::default()).unwrap();
            let classes = short_classes(&m.surface.dual(), 3);
            let mut map = DualEdgeMap::identity(m.surface.num_darts());
            let mut cur = m.clone();
            for step in &run.steps {
                let next = cur.smooth(step.record.vertex, step.record.choice).unwrap().0;
                let before = map.clone();
                map.then(&step.map);
                assert!(map.map.iter().all(|&d| d < next.surface.num_darts()));
                for c in &classes {
                    let a = oracle_nu(&cur, &before.apply(c), c.len(), 500_000).unwrap().exact();
                    let b = oracle_nu(&next, &map.apply(c), c.len(), 500_000).unwrap().exact();
                    if let (Some(a), Some(b)) = (a, b) {
                        assert_eq!(a, b);
                        checked += 1;
                    }
                }
                cur = next;
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn reflexive_on_the_standard_graph() {
        assert!(mu_spectra_equal(&standard(2), &[], &[]).unwrap());
        assert!(matches!(mu_spectra_equal(&standard(1), &[], &[]), Err(Error::LowGenus(1))));
    }

    #[test]
    fn lifted_curves_are_closed_and_essential() {
        let mut r = rng(5);
        let g = random_surface(2, 9, &mut r).unwrap();
        let ctx = SpectrumContext::new(&g, SearchConfig::default()).unwrap();
        let curves = ctx.kernel_curves(&[]).unwrap();
        assert!(!curves.is_empty());
        for c in &curves {
            assert!(!is_contractible(&ctx.medial.surface, &ctx.quads, c).unwrap());
        }
    }

    #[test]
    fn trace_prefixes_agree_and_broken_kernels_differ() {
        let mut r = rng(21);
        let (mut pos, mut neg) = (0, 0);
        for _ in 0..8 {
            let g = random_surface(2, 10, &mut r).unwrap();
            let ctx = SpectrumContext::new(&g, SearchConfig::default()).unwrap();
            let k = minor_kernel(&g, SearchConfig::default()).unwrap();
            let half = &k.ops[..k.ops.len() / 2];
            assert!(ctx.equal(half, &k.ops).unwrap());
            assert!(ctx.equal(&k.ops, half).unwrap());
            pos += 1;
            if let Some(op) = breaking_op(&k.kernel, &k.edges) {
                let mut broken = k.ops.clone();
                broken.push(op);
                apply_minor_ops(&g, &broken).unwrap();
                assert!(!ctx.equal(&k.ops, &broken).unwrap());
                assert!(!ctx.equal(&broken, &k.ops).unwrap());
                neg += 1;
            }
        }
        assert!(pos > 0 && neg > 0);
    }
}

//! Acceptance suite: one line per criterion, printed with its measured values.
//!
//! Run with `cargo test -p surfkernel --test acceptance -- --nocapture` to see the lines.

use std::time::{Duration, Instant};

use rand::Rng;

use surfkernel::area::{ccw_face_walk, select_coboundaries, wedge, AreaPrecomp};
use surfkernel::bigon::{
    minimal_bigon_search, smooth_all_empty_monogons, smoothing_minimal, BigonReport, KernelRun, SearchConfig,
    SearchOutcome, SectorOrder,
};
use surfkernel::cover::{has_simple_lift, StarShapedCover};
use surfkernel::curves::{CurveSystem, Provenance};
use surfkernel::generate::{random_surface, random_system, rng};
use surfkernel::homotopy::{canonical_rep, systems_homotopic_up_to_orientation};
use surfkernel::medial::medial;
use surfkernel::minor::{apply_minor_ops, minor_kernel, MinorOp};
use surfkernel::oracle::{oracle_nu, oracle_signed_area, oracle_simple_lift, Presentation};
use surfkernel::quad::QuadSystem;
use surfkernel::spectrum::{DualEdgeMap, SpectrumContext};
use surfkernel::surface::{opp, EdgeClass, Surface};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

/// Bigons found by the driver, each with the vertex count of the system it was found in.
#[derive(Default)]
struct BigonLog {
    found: Vec<(BigonReport, usize, usize)>,
}

impl BigonLog {
    fn record(&mut self, start: usize, genus: usize, run: &KernelRun) {
        let mut bigons = run.bigons.iter();
        for (j, step) in run.steps.iter().enumerate() {
            if step.record.provenance == Provenance::BigonCorner {
                self.found.push((bigons.next().unwrap().clone(), start - j, genus));
            }
        }
    }
}

fn random_walk(s: &Surface, len: usize, r: &mut impl Rng) -> Vec<usize> {
    let mut v = r.gen_range(0..s.num_vertices());
    (0..len)
        .map(|_| {
            let rot = s.rotation(v);
            let d = rot[r.gen_range(0..rot.len())];
            v = s.head(d);
            d
        })
        .collect()
}

fn lifted_curves(run: &KernelRun) -> Vec<Vec<usize>> {
    run.system.curves().iter().map(|c| run.system.lift_walk(c)).collect()
}

fn criterion_1(log: &mut BigonLog) -> Outcome {
    let mut worst = Duration::ZERO;
    let mut failures = Vec::new();
    let mut smoothings = 0;
    for i in 0..50u64 {
        let g = 2 + (i % 2) as usize;
        let n = 10 + (i as usize * 7) % 31;
        let cs = random_system(g, n, 1000 + i).unwrap();
        let t = Instant::now();
        let run = smoothing_minimal(&cs, SearchConfig::default()).unwrap();
        worst = worst.max(t.elapsed());
        smoothings += run.steps.len();
        log.record(cs.num_vertices(), g, &run);
        let monogons = run.system.find_empty_monogons().len();
        let tight = matches!(minimal_bigon_search(&run.system, g, SearchConfig::default()), Ok(SearchOutcome::Tight(_)));
        let rerun = smoothing_minimal(&run.system, SearchConfig::default()).unwrap().steps.len();
        if monogons != 0 || !tight || rerun != 0 || t.elapsed() > Duration::from_secs(10) {
            failures.push(i);
        }
    }
    outcome(
        failures.is_empty(),
        format!("50 systems, {smoothings} smoothings, slowest {worst:.2?}, failing instances {failures:?}"),
    )
}

fn criterion_2(log: &mut BigonLog) -> Outcome {
    let mut bad = 0;
    for i in 0..20u64 {
        let g = 2 + (i % 2) as usize;
        let cs = random_system(g, 20 + (i as usize * 3) % 21, 2000 + i).unwrap();
        let q = QuadSystem::build(&cs.surface).unwrap();
        let systems: Vec<Vec<Vec<usize>>> = (0..5u64)
            .map(|k| {
                let cfg = SearchConfig { order: SectorOrder::Shuffled(97 * i + k), ..SearchConfig::default() };
                let run = smoothing_minimal(&cs, cfg).unwrap();
                log.record(cs.num_vertices(), g, &run);
                lifted_curves(&run)
            })
            .collect();
        for a in 0..5 {
            for b in a + 1..5 {
                if !systems_homotopic_up_to_orientation(&cs.surface, &q, &systems[a], &systems[b]).unwrap() {
                    bad += 1;
                }
            }
        }
    }
    outcome(bad == 0, format!("20 instances x 5 orders, {bad} of 200 pairs differ"))
}

fn criterion_3(log: &BigonLog) -> Outcome {
    let bad = log.found.iter().filter(|(b, n, g)| !b.within_bounds(*n, *g)).count();
    let longest = log.found.iter().map(|(b, _, _)| b.total_length()).max().unwrap_or(0);
    let largest = log.found.iter().map(|(b, _, _)| b.area).max().unwrap_or(0);
    outcome(
        bad == 0 && !log.found.is_empty(),
        format!("{} bigons, {bad} out of bounds, longest {longest}, largest area {largest}", log.found.len()),
    )
}

fn criterion_4(covers: &mut Vec<(Surface, Vec<usize>)>) -> Outcome {
    let mut r = rng(4);
    let t = Instant::now();
    let (mut agree, mut simple) = (0, 0);
    for i in 0..500 {
        let g = 2 + i % 2;
        let s = random_surface(g, 4 * g + r.gen_range(0..12), &mut r).unwrap();
        let q = QuadSystem::build(&s).unwrap();
        let pres = Presentation::new(&s).unwrap();
        let w = random_walk(&s, r.gen_range(1..=30), &mut r);
        let got = has_simple_lift(&s, &q, &w).unwrap().collision;
        let want = oracle_simple_lift(&s, &pres, &w).unwrap();
        agree += usize::from(got == want);
        simple += usize::from(want.is_none());
        if i % 10 == 0 {
            covers.push((s, w));
        }
    }
    outcome(
        agree == 500 && t.elapsed() < Duration::from_secs(5),
        format!("{agree}/500 agree ({simple} simple), {:.2?}", t.elapsed()),
    )
}

fn criterion_5() -> Outcome {
    let mut r = rng(5);
    let mut bad = Vec::new();
    for i in 0..200 {
        let g = 2 + i % 2;
        let s = random_surface(g, 4 * g + r.gen_range(0..14), &mut r).unwrap();
        let q = QuadSystem::build(&s).unwrap();
        let pre = AreaPrecomp::new(&s).unwrap();
        let pres = Presentation::new(&s).unwrap();
        let base = r.gen_range(0..s.num_vertices());
        // built from the empty walk by insertions whose areas are known
        let (mut c, mut expected): (Vec<usize>, i64) = (Vec::new(), 0);
        for _ in 0..r.gen_range(1..8) {
            let at = r.gen_range(0..=c.len());
            let v = if c.is_empty() { base } else if at == c.len() { s.head(c[at - 1]) } else { s.tail(c[at]) };
            let rot = s.rotation(v);
            let d = rot[r.gen_range(0..rot.len())];
            let insert: Vec<usize> = match r.gen_range(0..3) {
                0 => vec![d, opp(d)],
                1 => {
                    let mut f = ccw_face_walk(&s, s.face(opp(d)));
                    let p = f.iter().position(|&x| x == d).unwrap();
                    f.rotate_left(p);
                    expected += 1;
                    f
                }
                _ => {
                    let mut f = s.face_walk(s.face(d));
                    let p = f.iter().position(|&x| x == d).unwrap();
                    f.rotate_left(p);
                    expected -= 1;
                    f
                }
            };
            c.splice(at..at, insert);
        }
        let a = pre.signed_area(&s, &q, &c).unwrap();
        // bounded regions hold at most (faces / (4g - 6)) faces per boundary edge
        let cap = s.num_faces() * c.len() + 64;
        let o = oracle_signed_area(&s, &pres, &c, cap).unwrap();
        let rev: Vec<usize> = c.iter().rev().map(|&d| opp(d)).collect();
        let at = r.gen_range(0..c.len());
        let v = s.tail(c[at]);
        let d = s.rotation(v)[0];
        let mut spur = c.clone();
        spur.splice(at..at, [d, opp(d)]);
        let mut face = ccw_face_walk(&s, s.face(opp(d)));
        let p = face.iter().position(|&x| x == d).unwrap();
        face.rotate_left(p);
        let mut plus = c.clone();
        plus.splice(at..at, face);
        let ok = o == Some(a)
            && a == expected
            && pre.signed_area(&s, &q, &rev).unwrap() == -a
            && pre.signed_area(&s, &q, &spur).unwrap() == a
            && pre.signed_area(&s, &q, &plus).unwrap() == a + 1;
        if !ok {
            bad.push(i);
        }
    }
    outcome(bad.is_empty(), format!("200 contractible walks, failing samples {bad:?}"))
}

fn criterion_6() -> Outcome {
    let mut r = rng(6);
    let mut bad = 0;
    for i in 0..20 {
        let g = 2 + i % 3;
        let s = random_surface(g, 2 * g + r.gen_range(0..20), &mut r).unwrap();
        let tc = s.tree_cotree();
        if tc.edges(EdgeClass::Leftover).len() != 2 * g {
            bad += 1;
            continue;
        }
        let red = s.reduce(&tc).unwrap();
        let p = select_coboundaries(&red).unwrap();
        for k in 0..red.boundary.len() {
            let mut w = red.boundary.clone();
            w.rotate_left(k);
            if wedge(&p.omega, &p.eta, &w) != 2 {
                bad += 1;
            }
        }
    }
    outcome(bad == 0, format!("20 reduced graphs, all 4g rotations, {bad} violations"))
}

fn criterion_7(walks: &[(Surface, Vec<usize>)]) -> Outcome {
    let mut r = rng(7);
    let (mut covers, mut bad) = (0, 0);
    let mut check = |q: &QuadSystem, w: &[usize]| {
        let mut c = StarShapedCover::new(q, q.tail(w[0]));
        c.trace_walk(w).unwrap();
        let st = c.stats();
        covers += 1;
        if 2 * st.edges > 5 * st.boundary || 4 * st.faces + st.boundary != 2 * st.edges || st.edges > 5 * w.len() {
            bad += 1;
        }
    };
    for (s, w) in walks {
        let q = QuadSystem::build(s).unwrap();
        let p = q.project(w);
        if !p.is_empty() {
            check(&q, &p);
        }
    }
    for i in 0..100 {
        let s = random_surface(2 + i % 2, 10, &mut r).unwrap();
        let q = QuadSystem::build(&s).unwrap();
        let len = r.gen_range(1..=60);
        check(&q, &random_walk(&q.surface, len, &mut r));
    }
    outcome(bad == 0, format!("{covers} covers, {bad} violations"))
}

/// A deletion or contraction of a kernel edge that keeps the embedding cellular.
fn breaking_op(k: &Surface, edges: &[usize]) -> Option<MinorOp> {
    (0..k.num_edges()).find_map(|e| {
        let d = 2 * e;
        if k.face(d) != k.face(opp(d)) {
            Some(MinorOp::Delete(edges[e]))
        } else if k.tail(d) != k.head(d) {
            Some(MinorOp::Contract(edges[e]))
        } else {
            None
        }
    })
}

fn criterion_8() -> Outcome {
    let mut r = rng(8);
    let (mut pos, mut neg, mut wrong) = (0, 0, 0);
    for _ in 0..500 {
        if pos >= 20 && neg >= 20 {
            break;
        }
        let g = random_surface(2 + r.gen_range(0..2), 10 + r.gen_range(0..10), &mut r).unwrap();
        let k = minor_kernel(&g, SearchConfig::default()).unwrap();
        let ctx = SpectrumContext::new(&g, SearchConfig::default()).unwrap();
        if pos < 20 && !k.ops.is_empty() {
            let cut = r.gen_range(0..k.ops.len());
            wrong += usize::from(!ctx.equal(&k.ops[..cut], &k.ops).unwrap());
            pos += 1;
        }
        if neg < 20 {
            if let Some(op) = breaking_op(&k.kernel, &k.edges) {
                let mut broken = k.ops.clone();
                broken.push(op);
                if apply_minor_ops(&g, &broken).is_ok() {
                    wrong += usize::from(ctx.equal(&k.ops, &broken).unwrap());
                    neg += 1;
                }
            }
        }
    }
    outcome(
        pos == 20 && neg == 20 && wrong == 0,
        format!("{pos} positive and {neg} negative cases, {wrong} wrong verdicts"),
    )
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
                    if end == v && w[0] != opp(w[len - 1]) {
                        let c = canonical_rep(s, &q, &w).unwrap();
                        if !c.0.is_empty() && !seen.contains(&c) {
                            seen.push(c);
                            out.push(w);
                            if out.len() == k {
                                return out;
                            }
                        }
                    }
                    continue;
                }
                for d in s.rotation(end) {
                    if d != opp(w[w.len() - 1]) {
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

fn criterion_9() -> Outcome {
    let (mut instances, mut compared, mut differ) = (0, 0, 0);
    for seed in 0..100 {
        if instances == 5 {
            break;
        }
        let m: CurveSystem = medial(&random_surface(2, 6 + seed as usize % 3, &mut rng(900 + seed)).unwrap());
        let run = smoothing_minimal(&m, SearchConfig::default()).unwrap();
        if run.steps.is_empty() {
            continue;
        }
        let classes = short_classes(&m.surface.dual(), 3);
        let nu = |cs: &CurveSystem, c: &[usize]| oracle_nu(cs, c, c.len(), 2_000_000).unwrap().exact();
        let mut map = DualEdgeMap::identity(m.surface.num_darts());
        let mut cur = m.clone();
        let mut stable = true;
        let mut local = 0;
        for step in &run.steps {
            let next = cur.smooth(step.record.vertex, step.record.choice).unwrap().0;
            let before = map.clone();
            map.then(&step.map);
            for c in &classes {
                match (nu(&cur, &before.apply(c)), nu(&next, &map.apply(c))) {
                    (Some(a), Some(b)) => {
                        local += 1;
                        differ += usize::from(a != b);
                    }
                    _ => stable = false,
                }
            }
            cur = next;
        }
        if stable && classes.len() == 3 {
            instances += 1;
            compared += local;
        }
    }
    outcome(
        instances == 5 && differ == 0,
        format!("{instances} instances, {compared} before/after comparisons, {differ} changed"),
    )
}

fn criterion_10() -> Outcome {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut cells = Vec::new();
    for n in [100, 200, 400, 800] {
        let mut times = Vec::new();
        let mut size = 0.0;
        for seed in 0..5 {
            let cs = smooth_all_empty_monogons(&random_system(2, n, 3000 + seed).unwrap()).unwrap().0;
            size += cs.num_vertices() as f64 / 5.0;
            let t = Instant::now();
            minimal_bigon_search(&cs, 2, SearchConfig::default()).unwrap();
            times.push(t.elapsed().as_secs_f64());
        }
        times.sort_by(f64::total_cmp);
        xs.push(size.ln());
        ys.push(times[2].ln());
        cells.push(format!("n={n}:{:.1}ms", times[2] * 1e3));
    }
    let mx = xs.iter().sum::<f64>() / 4.0;
    let my = ys.iter().sum::<f64>() / 4.0;
    let slope = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum::<f64>()
        / xs.iter().map(|x| (x - mx).powi(2)).sum::<f64>();
    let cs = random_system(2, 400, 4000).unwrap();
    let t = Instant::now();
    smoothing_minimal(&cs, SearchConfig::default()).unwrap();
    let kernel = t.elapsed();
    outcome(
        slope <= 2.4 && kernel < Duration::from_secs(60),
        format!("exponent {slope:.2} over [{}], kernel at n=400 {kernel:.2?}", cells.join(" ")),
    )
}

#[test]
fn acceptance() {
    let mut log = BigonLog::default();
    let mut walks = Vec::new();
    let mut failed = Vec::new();
    let mut report = |i: usize, name: &str, o: Outcome| {
        println!("criterion {i:>2} {} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed.push(i);
        }
    };
    report(1, "kernel correctness", criterion_1(&mut log));
    report(2, "kernel uniqueness", criterion_2(&mut log));
    report(3, "bigon bounds", criterion_3(&log));
    report(4, "simple lift against the word problem", criterion_4(&mut walks));
    report(5, "area against the word problem", criterion_5());
    report(6, "co-boundary wedge", criterion_6());
    report(7, "cover isoperimetry", criterion_7(&walks));
    report(8, "spectrum equality", criterion_8());
    report(9, "crossing numbers under smoothing", criterion_9());
    report(10, "runtime scaling", criterion_10());
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}

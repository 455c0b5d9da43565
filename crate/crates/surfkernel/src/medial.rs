//! Medial systems and the doubling construction that turns crossing counts with a graph
//! into vertex-allowed crossing counts with another graph.

use crate::curves::{CurveSystem, FaceColor};
use crate::error::{Error, Result};
use crate::surface::{isomorphic, opp, Surface, NONE};

/// Medial system of `g`: vertex `e` sits on edge `e`; medial dart `2d` runs from edge `d`
/// to edge `phi(d)` inside the face to the right of `d`.
pub fn medial(g: &Surface) -> CurveSystem {
    let rotations: Vec<Vec<usize>> = (0..g.num_edges())
        .map(|e| {
            let a = 2 * e;
            let abar = a + 1;
            vec![2 * g.phi_inv(abar) + 1, 2 * abar, 2 * g.phi_inv(a) + 1, 2 * a]
        })
        .collect();
    let surface = Surface::from_rotations(&rotations).expect("medial of a cellular graph is cellular");
    let colors = (0..surface.num_darts())
        .map(|m| if m & 1 == 0 { FaceColor::Face } else { FaceColor::Vertex })
        .collect();
    let mut cs = CurveSystem::decompose(surface).expect("medial is 4-regular");
    cs.dart_color = Some(colors);
    cs
}

/// Output of the doubling and blow-up construction.
#[derive(Clone, Debug)]
pub struct MuGraph {
    pub h: Surface,
    /// The blown-up doubled graph, whose medial inverse is `h`.
    pub blown: CurveSystem,
    /// `copy[x][side]`: dart of `blown` running alongside `x` from its tail to its head,
    /// on its right (`side = 0`) or left (`side = 1`).
    pub copy: Vec<[usize; 2]>,
}

impl MuGraph {
    /// Image in the dual of `blown` of a dual walk of the source graph.
    pub fn map_dual_walk(&self, walk: &[usize]) -> Vec<usize> {
        walk.iter().flat_map(|&d| [self.copy[d][0], self.copy[d][1]]).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Node {
    Port(usize),
    Boundary(usize),
}

/// Builds `H` with `mu_H = nu_G`, following the doubling construction.
pub fn nu_to_mu_graph(g: &Surface) -> Result<MuGraph> {
    // boundary point ids: 2 * x + side for dart x at its tail
    let nb = 2 * g.num_darts();
    let mut inner = vec![Node::Boundary(NONE); nb];
    let mut port_link: Vec<Node> = Vec::new();
    let mut rotations: Vec<[usize; 4]> = Vec::new();
    for v in 0..g.num_vertices() {
        let rot = g.rotation(v);
        let d = rot.len();
        let point = |p: usize| 2 * rot[p / 2] + (p % 2);
        // track[t] = wire currently on track t; last[w] = node the wire reached
        let mut track: Vec<usize> = (0..d).collect();
        let mut last: Vec<Node> = (0..d).map(|w| Node::Boundary(point(w))).collect();
        let link = |a: Node, b: Node, inner: &mut Vec<Node>, port_link: &mut Vec<Node>| {
            for (x, y) in [(a, b), (b, a)] {
                match x {
                    Node::Port(p) => port_link[p] = y,
                    Node::Boundary(q) => inner[q] = y,
                }
            }
        };
        for k in 0..d {
            for t in 0..d.saturating_sub(1 + k) {
                let (top, bot) = (track[t], track[t + 1]);
                let c = rotations.len();
                // ports ccw: NE, NW, SW, SE
                let base = 4 * c;
                port_link.extend([Node::Port(NONE); 4]);
                rotations.push([base, base + 1, base + 2, base + 3]);
                link(last[top], Node::Port(base + 1), &mut inner, &mut port_link);
                link(last[bot], Node::Port(base + 2), &mut inner, &mut port_link);
                last[top] = Node::Port(base + 3);
                last[bot] = Node::Port(base);
                track.swap(t, t + 1);
            }
        }
        for w in 0..d {
            link(last[w], Node::Boundary(point(w + d)), &mut inner, &mut port_link);
        }
    }
    // the copy of x on its right meets the copy of opp(x) on its left
    let outer = |q: usize| -> usize {
        let x = q / 2;
        2 * opp(x) + (1 - q % 2)
    };
    let nports = port_link.len();
    let mut dart_of_port = vec![NONE; nports];
    let mut copy = vec![[NONE; 2]; g.num_darts()];
    let mut edges = 0;
    for p in 0..nports {
        if dart_of_port[p] != NONE {
            continue;
        }
        let fwd = 2 * edges;
        edges += 1;
        dart_of_port[p] = fwd;
        let mut cur = port_link[p];
        let mut from_inside = true;
        loop {
            match cur {
                Node::Port(r) => {
                    dart_of_port[r] = fwd + 1;
                    break;
                }
                Node::Boundary(q) => {
                    if from_inside {
                        // leaving the disk at the tail of q / 2 along its copy
                        let x = q / 2;
                        copy[x][q % 2] = fwd;
                        let other = outer(q);
                        copy[opp(x)][other % 2] = fwd + 1;
                        cur = Node::Boundary(other);
                        from_inside = false;
                    } else {
                        cur = inner[q];
                        from_inside = true;
                    }
                }
            }
        }
    }
    if copy.iter().any(|c| c.contains(&NONE)) {
        return Err(Error::Invalid("blow-up leaves a closed strand without crossings".into()));
    }
    let rot: Vec<Vec<usize>> = rotations.iter().map(|r| r.iter().map(|&p| dart_of_port[p]).collect()).collect();
    let blown_surface = Surface::from_rotations(&rot)?;
    // proper 2-coloring of the faces, white = faces of the doubled graph away from edges
    let nf = blown_surface.num_faces();
    let mut white = vec![None; nf];
    // the face right of the right-hand copy of dart 0 lies in a face of the doubled graph
    let seed = blown_surface.face(copy[0][0]);
    white[seed] = Some(true);
    let mut stack = vec![seed];
    while let Some(f) = stack.pop() {
        let c = white[f].unwrap();
        for d in blown_surface.face_walk(f) {
            let h = blown_surface.face(opp(d));
            match white[h] {
                None => {
                    white[h] = Some(!c);
                    stack.push(h);
                }
                Some(x) if x == c => return Err(Error::Invalid("faces are not 2-colorable".into())),
                _ => {}
            }
        }
    }
    // H: one vertex per white face, one edge per crossing
    let s = &blown_surface;
    let white_ids: Vec<usize> = {
        let mut next = 0;
        (0..nf)
            .map(|f| {
                if white[f] == Some(true) {
                    next += 1;
                    next - 1
                } else {
                    NONE
                }
            })
            .collect()
    };
    let mut h_rot: Vec<Vec<usize>> = vec![Vec::new(); white_ids.iter().filter(|&&x| x != NONE).count()];
    for f in 0..nf {
        if white[f] != Some(true) {
            continue;
        }
        let walk = s.face_walk(f);
        let mut corners: Vec<usize> = walk
            .iter()
            .map(|&d| {
                let n = s.phi(d);
                let c = s.tail(n);
                let r = s.rotation(c);
                let i = r.iter().position(|&x| x == n).unwrap();
                if i < 2 {
                    2 * c
                } else {
                    2 * c + 1
                }
            })
            .collect();
        corners.reverse();
        h_rot[white_ids[f]] = corners;
    }
    let h = Surface::from_rotations(&h_rot)?;
    let blown = CurveSystem::decompose(blown_surface)?;
    if !isomorphic(&medial(&h).surface, &blown.surface) {
        return Err(Error::Invalid("blown-up graph is not the medial of the constructed graph".into()));
    }
    Ok(MuGraph { h, blown, copy })
}

//! Small reference surfaces.

use crate::surface::Surface;

/// One vertex with loops `a_i b_i ā_i b̄_i` for `i < g`; the classic polygon gluing.
pub fn standard(g: usize) -> Surface {
    let mut rot = Vec::with_capacity(4 * g);
    for i in 0..g {
        let a = 4 * i;
        let b = 4 * i + 2;
        rot.extend([a, b, a + 1, b + 1]);
    }
    Surface::from_rotations(&[rot]).expect("standard surface is valid")
}

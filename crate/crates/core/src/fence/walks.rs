//! Fence heights generated by gluing shapes, independently of the closed
//! formulas.

use super::sequences::{a_seq_constructive, atilde_interleaved};

const ODD_SHAPE: [i64; 8] = [0, 2, 1, 2, 1, 3, 2, 3];

/// Heights at `x = 1, 3, 5, ..` up to `max_x`: shape copies glued with
/// drop-downs `z_{16n+1} = z_{16n-1} - a_n`. Element `i` is `z_{2i+1}`.
pub fn odd_shape_walk(max_x: u64) -> Vec<i64> {
    let count = (max_x as usize).div_ceil(2);
    let drops = a_seq_constructive(count / 8 + 2);
    let mut z = Vec::with_capacity(count);
    let mut base = 0i64;
    let mut n = 0usize;
    while z.len() < count {
        for off in ODD_SHAPE {
            z.push(base + off);
        }
        base = base + ODD_SHAPE[7] - drops[n] as i64;
        n += 1;
    }
    z.truncate(count);
    z
}

const WIDE: [i64; 13] = [0, 1, 3, 3, 2, 5, 4, 6, 6, 8, 6, 6, 8];
const TOWER_L: usize = 3;
const TOWER_R: usize = 11;
const NARROW: [i64; 13] = [0, 1, 3, 6, 2, 5, 4, 7, 6, 8, 6, 11, 8];
const TOWER_M: usize = 7;

/// Heights at `x = 2, 4, 6, ..` up to `max_x`. Element `i` is `z_{2i+2}`.
///
/// The opening shape covers `x = 2..8`; after it the wide and narrow shapes
/// alternate, each spanning 24 units and sharing its end points.
pub fn even_shape_walk(max_x: u64) -> Vec<i64> {
    let count = max_x as usize / 2;
    let shapes = count / 12 + 2;
    let r_src = a_seq_constructive(3 * shapes + 3);
    let r = |k: usize| 2 * r_src[3 * k - 2] as i64 + 3;
    let l = |k: usize| if k % 2 == 1 { 5 } else { r(k / 2) };
    let at = atilde_interleaved(shapes + 2);
    let m = |k: usize| if k % 2 == 1 { 0 } else { at[k / 2 - 1] as i64 };

    let mut z = vec![2, 2, 8];
    let mut base = 4i64;
    let mut j = 1usize;
    while z.len() < count {
        let mut wide = WIDE;
        wide[TOWER_L] += l(j);
        wide[TOWER_R] += r(j);
        let mut narrow = NARROW;
        narrow[TOWER_M] += m(j);
        for shape in [wide, narrow] {
            for off in &shape[..12] {
                z.push(base + off);
            }
            base += shape[12];
        }
        j += 1;
    }
    z.truncate(count);
    z
}

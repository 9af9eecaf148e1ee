//! Roots of monic complex cubics `s^3 + a s^2 + b s + c`.

use num_complex::Complex64 as C64;

const NEWTON_ITERS: usize = 8;

/// Evaluates `s^3 + a s^2 + b s + c` by Horner's rule.
pub fn eval_monic(a: C64, b: C64, c: C64, s: C64) -> C64 {
    ((s + a) * s + b) * s + c
}

/// All three roots of `s^3 + a s^2 + b s + c`, by Cardano's formula followed
/// by a guarded Newton polish on each root.
///
/// Repeated roots come back as numerically coincident values.
pub fn solve_cubic(a: C64, b: C64, c: C64) -> [C64; 3] {
    let shift = a / 3.0;
    // depressed cubic y^3 + p y + q with s = y - a/3
    let p = b - a * a / 3.0;
    let q = a * a * a * (2.0 / 27.0) - a * b / 3.0 + c;
    let disc = q * q / 4.0 + p * p * p / 27.0;
    let sq = disc.sqrt();
    let u3 = {
        let plus = -q / 2.0 + sq;
        let minus = -q / 2.0 - sq;
        if plus.norm() >= minus.norm() { plus } else { minus }
    };
    let mut roots = if u3.norm() == 0.0 {
        [-shift; 3]
    } else {
        let u = u3.cbrt();
        let omega = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / 3.0);
        let mut out = [C64::new(0.0, 0.0); 3];
        let mut rot = C64::new(1.0, 0.0);
        for root in out.iter_mut() {
            let uk = u * rot;
            *root = uk - p / (3.0 * uk) - shift;
            rot *= omega;
        }
        out
    };
    for root in roots.iter_mut() {
        *root = polish(a, b, c, *root);
    }
    roots
}

fn polish(a: C64, b: C64, c: C64, mut s: C64) -> C64 {
    let mut f = eval_monic(a, b, c, s);
    for _ in 0..NEWTON_ITERS {
        if f.norm() == 0.0 {
            break;
        }
        let df = (3.0 * s + 2.0 * a) * s + b;
        if df.norm() == 0.0 {
            break;
        }
        let next = s - f / df;
        let f_next = eval_monic(a, b, c, next);
        if !(f_next.norm() < f.norm()) {
            break;
        }
        s = next;
        f = f_next;
    }
    s
}

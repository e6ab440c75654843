use num_rational::BigRational;
use num_traits::Zero;

use super::compensated::Compensated;
use super::partial::floor_bound;
use crate::convolution::DenseTable2;
use crate::error::{Error, Result};

fn bounds(bound: usize, x: f64, y: f64) -> Result<(usize, usize)> {
    let (nx, ny) = (floor_bound(x)? as usize, floor_bound(y)? as usize);
    if nx.max(ny) > bound {
        return Err(Error::OutOfRange { n: nx.max(ny) as u64, bound: bound as u64 });
    }
    Ok((nx, ny))
}

/// Box prefix sums `M(n₁, n₂)` on `[0, nx] × [0, ny]`, flattened row-major.
fn prefix<T: Clone>(
    nx: usize,
    ny: usize,
    zero: T,
    a: impl Fn(usize, usize) -> T,
    add: impl Fn(&T, &T) -> T,
    sub: impl Fn(&T, &T) -> T,
) -> Vec<T> {
    let w = ny + 1;
    let mut m = vec![zero; (nx + 1) * w];
    for i in 1..=nx {
        for j in 1..=ny {
            let s = add(&add(&m[(i - 1) * w + j], &m[i * w + j - 1]), &a(i, j));
            m[i * w + j] = sub(&s, &m[(i - 1) * w + j - 1]);
        }
    }
    m
}

/// Both sides of the two-variable partial summation identity
///
/// `Σ a/(n₁n₂) = Σ M(n₁,n₂)/(n₁(n₁+1)n₂(n₂+1)) + Σ_{n₁} M(n₁,y)/(n₁(n₁+1)(⌊y⌋+1))
///  + Σ_{n₂} M(x,n₂)/(n₂(n₂+1)(⌊x⌋+1)) + M(x,y)/((⌊x⌋+1)(⌊y⌋+1))`
///
/// in floating point with compensated accumulation.
pub fn abel2d_check(a: &DenseTable2<f64>, x: f64, y: f64) -> Result<(f64, f64)> {
    let (nx, ny) = bounds(a.bound(), x, y)?;
    let w = ny + 1;
    let m = prefix(nx, ny, 0.0, |i, j| *a.get(i as u64, j as u64), |p, q| p + q, |p, q| p - q);
    let mut lhs = Compensated::new();
    let mut rhs = Compensated::new();
    let (xp, yp) = ((nx + 1) as f64, (ny + 1) as f64);
    for i in 1..=nx {
        let ti = (i * (i + 1)) as f64;
        for j in 1..=ny {
            let tj = (j * (j + 1)) as f64;
            lhs.add(*a.get(i as u64, j as u64) / (i * j) as f64);
            rhs.add(m[i * w + j] / (ti * tj));
        }
        rhs.add(m[i * w + ny] / (ti * yp));
    }
    for j in 1..=ny {
        rhs.add(m[nx * w + j] / ((j * (j + 1)) as f64 * xp));
    }
    rhs.add(m[nx * w + ny] / (xp * yp));
    Ok((lhs.value(), rhs.value()))
}

/// The same identity evaluated exactly in rationals.
pub fn abel2d_check_exact(a: &DenseTable2<i128>, x: f64, y: f64) -> Result<(BigRational, BigRational)> {
    let (nx, ny) = bounds(a.bound(), x, y)?;
    let w = ny + 1;
    // integer prefix sums, converted once
    let m = prefix(nx, ny, 0i128, |i, j| *a.get(i as u64, j as u64), |p, q| p + q, |p, q| p - q);
    let frac = |num: i128, den: i128| BigRational::new(num.into(), den.into());
    let mut lhs = BigRational::zero();
    let mut rhs = BigRational::zero();
    let (xp, yp) = ((nx + 1) as i128, (ny + 1) as i128);
    for i in 1..=nx {
        let ti = (i * (i + 1)) as i128;
        for j in 1..=ny {
            let tj = (j * (j + 1)) as i128;
            lhs += frac(*a.get(i as u64, j as u64), (i * j) as i128);
            rhs += frac(m[i * w + j], ti * tj);
        }
        rhs += frac(m[i * w + ny], ti * yp);
    }
    for j in 1..=ny {
        rhs += frac(m[nx * w + j], (j * (j + 1)) as i128 * xp);
    }
    rhs += frac(m[nx * w + ny], xp * yp);
    Ok((lhs, rhs))
}

//! Exact rational and integer linear algebra, plus the small polyhedral
//! toolkit (cone duality, Fourier–Motzkin, lattice point enumeration) that
//! the rest of the crate is built on. Nothing in here touches floating point.

mod cone;
mod polyhedron;
mod smith;

pub use cone::{extreme_rays, ConeH, ConeV};
pub use polyhedron::{lattice_point_in, lattice_points, lattice_points_in_box, lp_feasible, Halfspace, HalfspaceSystem};
pub use smith::{integer_kernel, lattice_index, smith_normal_form, SmithForm};

use num::{BigInt, BigRational, Integer, One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;
pub type IntVector = Vec<i64>;
pub type RationalVector = Vec<Rat>;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn to_rational(v: &[i64]) -> RationalVector {
    v.iter().map(|&x| rat(x)).collect()
}

pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot_int(a: &[Rat], b: &[i64]) -> Rat {
    a.iter()
        .zip(b)
        .fold(Rat::zero(), |acc, (x, &y)| if y == 0 { acc } else { acc + x * BigInt::from(y) })
}

pub fn dot_i64(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn is_zero_vector(v: &[Rat]) -> bool {
    v.iter().all(Zero::is_zero)
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}

/// Divide an integer vector by the gcd of its entries.
pub fn primitive(v: &[i64]) -> Result<IntVector> {
    let g = v.iter().fold(0i64, |g, &x| gcd_i64(g, x));
    if g == 0 {
        return Err(Error::ZeroVector);
    }
    Ok(v.iter().map(|x| x / g).collect())
}

/// Scale a rational vector to the primitive integer vector pointing the same
/// way. Zero vectors are rejected.
pub fn primitive_rational(v: &[Rat]) -> Result<IntVector> {
    let scaled = clear_denominators(v);
    let g = scaled.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return Err(Error::ZeroVector);
    }
    scaled
        .iter()
        .map(|x| {
            let q = x / &g;
            i64::try_from(q).map_err(|_| Error::Malformed("lattice vector exceeds 64-bit range".into()))
        })
        .collect()
}

/// Multiply through by the lcm of the denominators.
pub fn clear_denominators(v: &[Rat]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    v.iter().map(|x| (x * Rat::from_integer(l.clone())).to_integer()).collect()
}

/// Rescale a nonzero rational vector by a positive factor so that it becomes
/// a primitive integer vector; used to give normals a canonical form.
pub fn normalize_direction(v: &[Rat]) -> RationalVector {
    let scaled = clear_denominators(v);
    let g = scaled.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    scaled.into_iter().map(|x| Rat::from_integer(x / &g)).collect()
}

pub fn lcm_of_denominators<'a>(it: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()))
}

/// Dense rational matrix stored by rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: Vec<RationalVector>,
    ncols: usize,
}

impl RationalMatrix {
    pub fn new(rows: Vec<RationalVector>, ncols: usize) -> Result<Self> {
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Dimension(format!("expected rows of length {ncols}")));
        }
        Ok(Self { rows, ncols })
    }

    pub fn from_int_rows(rows: &[IntVector], ncols: usize) -> Result<Self> {
        Self::new(rows.iter().map(|r| to_rational(r)).collect(), ncols)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[RationalVector] {
        &self.rows
    }

    /// Reduced row echelon form; returns the nonzero rows and pivot columns.
    pub fn rref(&self) -> (Vec<RationalVector>, Vec<usize>) {
        rref(self.rows.clone(), self.ncols)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : A x = 0}`.
    pub fn kernel(&self) -> Vec<RationalVector> {
        let (r, pivots) = self.rref();
        kernel_from_rref(&r, &pivots, self.ncols)
    }

    /// Some solution of `A x = b`, free variables set to zero.
    pub fn solve(&self, b: &[Rat]) -> Option<RationalVector> {
        assert_eq!(b.len(), self.rows.len());
        let n = self.ncols;
        let aug: Vec<RationalVector> = self
            .rows
            .iter()
            .zip(b)
            .map(|(r, x)| {
                let mut row = r.clone();
                row.push(x.clone());
                row
            })
            .collect();
        let (r, pivots) = rref(aug, n + 1);
        if pivots.last() == Some(&n) {
            return None;
        }
        let mut x = vec![Rat::zero(); n];
        for (row, &p) in r.iter().zip(&pivots) {
            x[p] = row[n].clone();
        }
        Some(x)
    }

    pub fn mul_vec(&self, v: &[Rat]) -> RationalVector {
        self.rows.iter().map(|r| dot(r, v)).collect()
    }
}

pub(crate) fn rref(mut rows: Vec<RationalVector>, ncols: usize) -> (Vec<RationalVector>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

fn kernel_from_rref(r: &[RationalVector], pivots: &[usize], ncols: usize) -> Vec<RationalVector> {
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rat::zero(); ncols];
        v[free] = Rat::one();
        for (row, &p) in r.iter().zip(pivots) {
            v[p] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

/// Pivot columns of the row-reduced span of `vectors`. Restricting a vector
/// of the span to these columns gives its coordinates in the reduced basis,
/// so the restriction is injective on the span.
pub fn span_pivots(vectors: &[RationalVector], ncols: usize) -> Vec<usize> {
    rref(vectors.to_vec(), ncols).1
}

pub fn restrict(v: &[Rat], columns: &[usize]) -> RationalVector {
    columns.iter().map(|&c| v[c].clone()).collect()
}

pub fn rank_of(vectors: &[RationalVector], ncols: usize) -> usize {
    rref(vectors.to_vec(), ncols).1.len()
}

pub fn rank_of_int(vectors: &[IntVector], ncols: usize) -> usize {
    rank_of(&vectors.iter().map(|v| to_rational(v)).collect::<Vec<_>>(), ncols)
}

/// Sign of a rational as -1, 0, 1.
pub fn sign(x: &Rat) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

pub fn floor(x: &Rat) -> Rat {
    x.floor()
}

pub fn ceil(x: &Rat) -> Rat {
    x.ceil()
}

pub fn to_i64(x: &Rat) -> Result<i64> {
    if !x.is_integer() {
        return Err(Error::breach(format!("expected integer, found {x}")));
    }
    i64::try_from(x.to_integer()).map_err(|_| Error::Malformed("integer exceeds 64-bit range".into()))
}

//! Exact 2x2 and 4x4 matrix algebra over Q and Q(sqrt(D)), and the small
//! polynomial toolkit (characteristic/minimal polynomials, cyclotomic
//! recognition, the even-quartic factorization helper).

use crate::exactnum::{rat_int, QuadNum, Rat};
use num::{One, Signed, Zero};
use std::fmt;
use std::ops::{Div, Neg, Sub};

/// Field scalars the matrix code is generic over (Q and Q(sqrt(D))).
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Sub<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn sadd(&self, rhs: &Self) -> Self {
        self.clone() + rhs.clone()
    }
    fn ssub(&self, rhs: &Self) -> Self {
        self.clone() - rhs.clone()
    }
    fn smul(&self, rhs: &Self) -> Self {
        self.clone() * rhs.clone()
    }
    fn sdiv(&self, rhs: &Self) -> Self {
        self.clone() / rhs.clone()
    }
    fn sneg(&self) -> Self {
        -self.clone()
    }
}

impl Scalar for Rat {}
impl Scalar for QuadNum {}

impl Zero for QuadNum {
    fn zero() -> Self {
        QuadNum::from_int(0)
    }
    fn is_zero(&self) -> bool {
        QuadNum::is_zero(self)
    }
}

impl One for QuadNum {
    fn one() -> Self {
        QuadNum::from_int(1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error("singular upper-left block")]
    SingularBlock,
    #[error("singular matrix")]
    SingularMatrix,
}

/// A 2x2 matrix over a field scalar.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat2<T: Scalar> {
    pub e: [[T; 2]; 2],
}

pub type Mat2Q = Mat2<Rat>;
pub type Mat2K = Mat2<QuadNum>;

impl<T: Scalar> Mat2<T> {
    pub fn new(e00: T, e01: T, e10: T, e11: T) -> Self {
        Self { e: [[e00, e01], [e10, e11]] }
    }

    pub fn identity() -> Self {
        Self::new(T::one(), T::zero(), T::zero(), T::one())
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero(), T::zero(), T::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().flatten().all(|x| Zero::is_zero(x))
    }

    /// Scalar multiple of the identity (includes 0).
    pub fn is_scalar(&self) -> bool {
        self.e[0][1].is_zero() && self.e[1][0].is_zero() && self.e[0][0] == self.e[1][1]
    }

    pub fn trace(&self) -> T {
        self.e[0][0].sadd(&self.e[1][1])
    }

    pub fn det(&self) -> T {
        self.e[0][0].smul(&self.e[1][1]).ssub(&self.e[0][1].smul(&self.e[1][0]))
    }

    pub fn scale(&self, c: &T) -> Self {
        let f = |x: &T| x.smul(c);
        Self::new(f(&self.e[0][0]), f(&self.e[0][1]), f(&self.e[1][0]), f(&self.e[1][1]))
    }

    pub fn neg(&self) -> Self {
        Self::new(
            self.e[0][0].sneg(),
            self.e[0][1].sneg(),
            self.e[1][0].sneg(),
            self.e[1][1].sneg(),
        )
    }

    pub fn add_mat(&self, rhs: &Self) -> Self {
        let f = |i: usize, j: usize| self.e[i][j].sadd(&rhs.e[i][j]);
        Self::new(f(0, 0), f(0, 1), f(1, 0), f(1, 1))
    }

    pub fn sub_mat(&self, rhs: &Self) -> Self {
        self.add_mat(&rhs.neg())
    }

    pub fn mul_mat(&self, rhs: &Self) -> Self {
        let f = |i: usize, j: usize| {
            self.e[i][0].smul(&rhs.e[0][j]).sadd(&self.e[i][1].smul(&rhs.e[1][j]))
        };
        Self::new(f(0, 0), f(0, 1), f(1, 0), f(1, 1))
    }

    pub fn inverse(&self) -> Result<Self, LinalgError> {
        let det = self.det();
        if Zero::is_zero(&det) {
            return Err(LinalgError::SingularMatrix);
        }
        Ok(Self::new(
            self.e[1][1].sdiv(&det),
            self.e[0][1].sneg().sdiv(&det),
            self.e[1][0].sneg().sdiv(&det),
            self.e[0][0].sdiv(&det),
        ))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::identity();
        for _ in 0..n {
            acc = acc.mul_mat(self);
        }
        acc
    }

    pub fn transpose(&self) -> Self {
        Self::new(
            self.e[0][0].clone(),
            self.e[1][0].clone(),
            self.e[0][1].clone(),
            self.e[1][1].clone(),
        )
    }
}

impl Mat2Q {
    pub fn from_i64(e00: i64, e01: i64, e10: i64, e11: i64) -> Self {
        Self::new(rat_int(e00), rat_int(e01), rat_int(e10), rat_int(e11))
    }

    /// Companion matrix of a monic quadratic x^2 + a1 x + a0.
    pub fn companion2(a1: &Rat, a0: &Rat) -> Self {
        Self::new(Rat::zero(), -a0.clone(), Rat::one(), -a1.clone())
    }

    /// Minimal polynomial: linear for scalar matrices, else the
    /// characteristic polynomial x^2 - tr x + det.
    pub fn min_poly(&self) -> Poly {
        if self.is_scalar() {
            Poly::new(vec![-self.e[0][0].clone(), Rat::one()])
        } else {
            Poly::new(vec![self.det(), -self.trace(), Rat::one()])
        }
    }

    /// Discriminant (tr A)^2 - 4 det A.
    pub fn disc2(&self) -> Rat {
        let t = self.trace();
        &t * &t - rat_int(4) * self.det()
    }

    /// Lifts into Q(sqrt(D)) entrywise.
    pub fn lift(&self) -> Mat2K {
        let f = |i: usize, j: usize| QuadNum::from_rat(self.e[i][j].clone());
        Mat2K::new(f(0, 0), f(0, 1), f(1, 0), f(1, 1))
    }
}

impl Mat2K {
    pub fn conj(&self) -> Self {
        let f = |i: usize, j: usize| self.e[i][j].conj();
        Self::new(f(0, 0), f(0, 1), f(1, 0), f(1, 1))
    }

    /// diag(1, -1), the parity involution.
    pub fn iota2() -> Self {
        Self::new(
            QuadNum::from_int(1),
            QuadNum::from_int(0),
            QuadNum::from_int(0),
            QuadNum::from_int(-1),
        )
    }
}

/// A 4x4 rational matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat4 {
    pub e: [[Rat; 4]; 4],
}

impl Mat4 {
    pub fn from_rows(rows: [[Rat; 4]; 4]) -> Self {
        Self { e: rows }
    }

    pub fn from_i64(rows: [[i64; 4]; 4]) -> Self {
        Self { e: rows.map(|r| r.map(rat_int)) }
    }

    pub fn identity() -> Self {
        let mut e: [[Rat; 4]; 4] = Default::default();
        for (i, row) in e.iter_mut().enumerate() {
            row[i] = Rat::one();
        }
        Self { e }
    }

    /// diag(1, 1, -1, -1), the parity involution on two cusps.
    pub fn iota() -> Self {
        let mut m = Self::identity();
        m.e[2][2] = -Rat::one();
        m.e[3][3] = -Rat::one();
        m
    }

    pub fn neg(&self) -> Self {
        Self { e: self.e.clone().map(|r| r.map(|x| -x)) }
    }

    pub fn add_mat(&self, rhs: &Self) -> Self {
        let mut out = Self::identity();
        for i in 0..4 {
            for j in 0..4 {
                out.e[i][j] = &self.e[i][j] + &rhs.e[i][j];
            }
        }
        out
    }

    pub fn sub_mat(&self, rhs: &Self) -> Self {
        self.add_mat(&rhs.neg())
    }

    pub fn mul_mat(&self, rhs: &Self) -> Self {
        let mut out = Self { e: Default::default() };
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = Rat::zero();
                for (k, rhs_row) in rhs.e.iter().enumerate() {
                    acc += &self.e[i][k] * &rhs_row[j];
                }
                out.e[i][j] = acc;
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self { e: self.e.clone().map(|r| r.map(|x| x * c)) }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::identity();
        for _ in 0..n {
            acc = acc.mul_mat(self);
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// Gauss-Jordan inverse; the generic oracle for [`block_inverse`].
    pub fn inverse(&self) -> Result<Self, LinalgError> {
        let mut a = self.e.clone();
        let mut b = Self::identity().e;
        for col in 0..4 {
            let pivot = (col..4)
                .find(|&r| !a[r][col].is_zero())
                .ok_or(LinalgError::SingularMatrix)?;
            a.swap(col, pivot);
            b.swap(col, pivot);
            let p = a[col][col].clone();
            for j in 0..4 {
                a[col][j] /= &p;
                b[col][j] /= &p;
            }
            for r in 0..4 {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for j in 0..4 {
                        let av = &a[col][j] * &f;
                        a[r][j] -= av;
                        let bv = &b[col][j] * &f;
                        b[r][j] -= bv;
                    }
                }
            }
        }
        Ok(Self { e: b })
    }

    pub fn det(&self) -> Rat {
        let mut a = self.e.clone();
        let mut det = Rat::one();
        for col in 0..4 {
            let pivot = match (col..4).find(|&r| !a[r][col].is_zero()) {
                Some(p) => p,
                None => return Rat::zero(),
            };
            if pivot != col {
                a.swap(col, pivot);
                det = -det;
            }
            det *= &a[col][col];
            let p = a[col][col].clone();
            for r in col + 1..4 {
                if !a[r][col].is_zero() {
                    let f = &a[r][col] / &p;
                    for j in col..4 {
                        let v = &a[col][j] * &f;
                        a[r][j] -= v;
                    }
                }
            }
        }
        det
    }

    /// The four 2x2 blocks in reading order.
    pub fn blocks(&self) -> [Mat2Q; 4] {
        let b = |ri: usize, ci: usize| {
            Mat2Q::new(
                self.e[ri][ci].clone(),
                self.e[ri][ci + 1].clone(),
                self.e[ri + 1][ci].clone(),
                self.e[ri + 1][ci + 1].clone(),
            )
        };
        [b(0, 0), b(0, 2), b(2, 0), b(2, 2)]
    }

    pub fn from_blocks(a1: &Mat2Q, a2: &Mat2Q, a3: &Mat2Q, a4: &Mat2Q) -> Self {
        let mut m = Self::identity();
        for i in 0..2 {
            for j in 0..2 {
                m.e[i][j] = a1.e[i][j].clone();
                m.e[i][j + 2] = a2.e[i][j].clone();
                m.e[i + 2][j] = a3.e[i][j].clone();
                m.e[i + 2][j + 2] = a4.e[i][j].clone();
            }
        }
        m
    }

    /// Block diagonal a ⊕ b.
    pub fn direct_sum(a: &Mat2Q, b: &Mat2Q) -> Self {
        Self::from_blocks(a, &Mat2Q::zero(), &Mat2Q::zero(), b)
    }

    /// Block anti-diagonal with a upper right, b lower left.
    pub fn anti_sum(a: &Mat2Q, b: &Mat2Q) -> Self {
        Self::from_blocks(&Mat2Q::zero(), a, b, &Mat2Q::zero())
    }

    fn flatten(&self) -> Vec<Rat> {
        self.e.iter().flatten().cloned().collect()
    }

    /// Minimal polynomial by exact Krylov iteration: the first power of M
    /// that is a rational combination of the lower ones.
    pub fn min_poly(&self) -> Poly {
        let mut powers: Vec<Vec<Rat>> = vec![Self::identity().flatten()];
        let mut cur = Self::identity();
        for d in 1..=4usize {
            cur = cur.mul_mat(self);
            let target = cur.flatten();
            if let Some(coeffs) = solve_linear_combo(&powers, &target) {
                // M^d = sum coeffs[i] M^i  =>  x^d - sum coeffs[i] x^i
                let mut c: Vec<Rat> = coeffs.into_iter().map(|c| -c).collect();
                c.push(Rat::one());
                return Poly::new(c);
            }
            powers.push(target);
            let _ = d;
        }
        unreachable!("a 4x4 matrix satisfies its degree-4 characteristic polynomial");
    }

    /// Characteristic polynomial via Faddeev-LeVerrier.
    pub fn char_poly(&self) -> Poly {
        let mut c = vec![Rat::zero(); 5];
        c[4] = Rat::one();
        let mut m = Self { e: Default::default() };
        for k in 1..=4usize {
            m = if k == 1 {
                self.clone()
            } else {
                let mut shifted = m;
                for (i, row) in shifted.e.iter_mut().enumerate() {
                    row[i] += &c[4 - (k - 1)] * Rat::one();
                }
                self.mul_mat(&shifted)
            };
            let tr: Rat = (0..4).map(|i| m.e[i][i].clone()).sum();
            c[4 - k] = -tr / rat_int(k as i64);
        }
        Poly::new(c)
    }

    /// Exact multiplicative order, or None. Finite order iff the minimal
    /// polynomial is a product of distinct cyclotomics from the fixed table.
    pub fn finite_order(&self) -> Option<u32> {
        let mut m = self.min_poly();
        let mut orders: Vec<u32> = Vec::new();
        for (order, phi) in cyclotomics() {
            if phi.degree() > m.degree() {
                continue;
            }
            if let Some(q) = m.divide_exact(&phi) {
                m = q;
                orders.push(order);
            }
        }
        if m.degree() == 0 && !orders.is_empty() {
            Some(orders.iter().fold(1u32, |a, &b| num::integer::lcm(a, b)))
        } else {
            None
        }
    }
}

/// Solves target = sum c_i basis_i exactly, if possible.
fn solve_linear_combo(basis: &[Vec<Rat>], target: &[Rat]) -> Option<Vec<Rat>> {
    let rows = target.len();
    let cols = basis.len();
    // augmented [basis^T | target]
    let mut a: Vec<Vec<Rat>> = (0..rows)
        .map(|r| {
            let mut row: Vec<Rat> = basis.iter().map(|b| b[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut rank = 0usize;
    for col in 0..cols {
        let pivot = (rank..rows).find(|&r| !a[r][col].is_zero());
        let Some(p) = pivot else { continue };
        a.swap(rank, p);
        let pv = a[rank][col].clone();
        for x in a[rank].iter_mut() {
            *x /= &pv;
        }
        for r in 0..rows {
            if r != rank && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..=cols {
                    let v = &a[rank][j] * &f;
                    a[r][j] -= v;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
    }
    // inconsistent?
    for row in a.iter().skip(rank) {
        if !row[cols].is_zero() {
            return None;
        }
    }
    if rank < rows && a.iter().skip(rank).any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut coeffs = vec![Rat::zero(); cols];
    for (r, &col) in pivot_cols.iter().enumerate() {
        coeffs[col] = a[r][cols].clone();
    }
    // verify (non-pivot columns must not be needed)
    for (r, row) in a.iter().enumerate().take(rows) {
        let lhs: Rat = (0..cols).map(|c| &row[c] * &coeffs[c]).sum();
        if lhs != row[cols] {
            let _ = r;
            return None;
        }
    }
    Some(coeffs)
}

/// Block-form inverse via the Schur complement M/A1 = A4 - A3 A1^-1 A2.
pub fn block_inverse(m: &Mat4) -> Result<Mat4, LinalgError> {
    let [a1, a2, a3, a4] = m.blocks();
    let a1_inv = a1.inverse().map_err(|_| LinalgError::SingularBlock)?;
    let schur = a4.sub_mat(&a3.mul_mat(&a1_inv).mul_mat(&a2));
    let schur_inv = schur.inverse().map_err(|_| LinalgError::SingularMatrix)?;
    let b1 = a1_inv.add_mat(
        &a1_inv
            .mul_mat(&a2)
            .mul_mat(&schur_inv)
            .mul_mat(&a3)
            .mul_mat(&a1_inv),
    );
    let b2 = a1_inv.mul_mat(&a2).mul_mat(&schur_inv).neg();
    let b3 = schur_inv.mul_mat(&a3).mul_mat(&a1_inv).neg();
    Ok(Mat4::from_blocks(&b1, &b2, &b3, &schur_inv))
}

/// A rational polynomial, coefficients ascending, trailing coefficient nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    c: Vec<Rat>,
}

impl Poly {
    pub fn new(mut c: Vec<Rat>) -> Self {
        while c.len() > 1 && c.last().map(Zero::is_zero).unwrap_or(false) {
            c.pop();
        }
        if c.is_empty() {
            c.push(Rat::zero());
        }
        Self { c }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| rat_int(x)).collect())
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.c
    }

    pub fn degree(&self) -> usize {
        self.c.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_zero()
    }

    pub fn is_monic(&self) -> bool {
        self.c.last().map(One::is_one).unwrap_or(false)
    }

    pub fn mul(&self, rhs: &Poly) -> Poly {
        let mut c = vec![Rat::zero(); self.c.len() + rhs.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in rhs.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }

    /// Quotient and remainder in `Q[x]`.
    pub fn divmod(&self, rhs: &Poly) -> (Poly, Poly) {
        assert!(!rhs.is_zero());
        let mut rem = self.c.clone();
        let dl = rhs.degree();
        let lead = rhs.c[dl].clone();
        if self.degree() < dl || self.is_zero() {
            return (Poly::new(vec![Rat::zero()]), self.clone());
        }
        let mut quot = vec![Rat::zero(); self.degree() - dl + 1];
        for k in (0..quot.len()).rev() {
            let f = &rem[k + dl] / &lead;
            if !Zero::is_zero(&f) {
                for j in 0..=dl {
                    let v = &rhs.c[j] * &f;
                    rem[k + j] -= v;
                }
            }
            quot[k] = f;
        }
        (Poly::new(quot), Poly::new(rem))
    }

    /// The exact quotient if rhs divides self.
    pub fn divide_exact(&self, rhs: &Poly) -> Option<Poly> {
        let (q, r) = self.divmod(rhs);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.divide_exact(self).is_some()
    }

    pub fn eval_mat4(&self, m: &Mat4) -> Mat4 {
        let mut acc = Mat4::identity().scale(&Rat::zero());
        let mut p = Mat4::identity();
        for (i, coeff) in self.c.iter().enumerate() {
            if i > 0 {
                p = p.mul_mat(m);
            }
            acc = acc.add_mat(&p.scale(coeff));
        }
        acc
    }
}

impl fmt::Display for Poly {
    /// `x^2-x+1` style: descending powers, coefficient 1 elided.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, coeff) in self.c.iter().enumerate().rev() {
            if Zero::is_zero(coeff) {
                continue;
            }
            let sign_neg = coeff.is_negative();
            let mag = coeff.abs();
            let coeff_str = if mag.is_one() && k > 0 {
                String::new()
            } else {
                crate::exactnum::fmt_rat(&mag)
            };
            let var = match k {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            };
            if first {
                write!(f, "{}{}{}", if sign_neg { "-" } else { "" }, coeff_str, var)?;
                first = false;
            } else {
                write!(f, "{}{}{}", if sign_neg { "-" } else { "+" }, coeff_str, var)?;
            }
        }
        Ok(())
    }
}

/// Cyclotomic polynomials of degree <= 4: the only orders a finite-order
/// element of GL4(Q) can involve.
pub fn cyclotomics() -> Vec<(u32, Poly)> {
    vec![
        (1, Poly::from_i64(&[-1, 1])),
        (2, Poly::from_i64(&[1, 1])),
        (3, Poly::from_i64(&[1, 1, 1])),
        (4, Poly::from_i64(&[1, 0, 1])),
        (5, Poly::from_i64(&[1, 1, 1, 1, 1])),
        (6, Poly::from_i64(&[1, -1, 1])),
        (8, Poly::from_i64(&[1, 0, 0, 0, 1])),
        (10, Poly::from_i64(&[1, -1, 1, -1, 1])),
        (12, Poly::from_i64(&[1, 0, -1, 0, 1])),
    ]
}

/// How x^4 + a x^2 + b splits into quadratics over Q, when it does.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EvenQuarticFactorization {
    Irreducible,
    /// (x^2 + m x + n)(x^2 - m x + n)
    SymmetricPair { m: Rat, n: Rat },
    /// (x^2 + m)(x^2 + n)
    TwoQuadratics { m: Rat, n: Rat },
}

impl EvenQuarticFactorization {
    /// Multiplies the reported factors back out (None for irreducible).
    pub fn expand(&self) -> Option<Poly> {
        match self {
            Self::Irreducible => None,
            Self::SymmetricPair { m, n } => {
                let p = Poly::new(vec![n.clone(), m.clone(), Rat::one()]);
                let q = Poly::new(vec![n.clone(), -m.clone(), Rat::one()]);
                Some(p.mul(&q))
            }
            Self::TwoQuadratics { m, n } => {
                let p = Poly::new(vec![m.clone(), Rat::zero(), Rat::one()]);
                let q = Poly::new(vec![n.clone(), Rat::zero(), Rat::one()]);
                Some(p.mul(&q))
            }
        }
    }
}

/// Factors x^4 + a x^2 + b into quadratics over Q when possible.
pub fn factor_even_quartic(a: &Rat, b: &Rat) -> EvenQuarticFactorization {
    use crate::exactnum::rat_sqrt;
    // (x^2+mx+n)(x^2-mx+n) = x^4 + (2n - m^2) x^2 + n^2
    if let Some(n0) = rat_sqrt(b) {
        for n in [n0.clone(), -n0] {
            let m2 = rat_int(2) * &n - a;
            if let Some(m) = rat_sqrt(&m2) {
                if !Zero::is_zero(&m) {
                    return EvenQuarticFactorization::SymmetricPair { m, n };
                }
            }
        }
    }
    // (x^2+m)(x^2+n): m + n = a, mn = b
    let disc = a * a - rat_int(4) * b;
    if let Some(s) = rat_sqrt(&disc) {
        let m = (a + &s) / rat_int(2);
        let n = (a - &s) / rat_int(2);
        return EvenQuarticFactorization::TwoQuadratics { m, n };
    }
    EvenQuarticFactorization::Irreducible
}

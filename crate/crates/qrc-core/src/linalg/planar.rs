//! Split real/imaginary ("planar") storage for the hot evolution kernels.
//!
//! Interleaved `Complex64` defeats autovectorization of the inner product
//! loops; storing the real and imaginary planes separately turns one complex
//! GEMM into four real GEMMs that the compiler vectorizes well. Everything
//! here is crate-internal: the public API speaks [`ComplexMatrix`].

use num_complex::Complex64;

use super::ComplexMatrix;

#[derive(Clone)]
pub(crate) struct PlanarMatrix {
    pub n: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl PlanarMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, re: vec![0.0; n * n], im: vec![0.0; n * n] }
    }

    pub fn from_complex(m: &ComplexMatrix) -> Self {
        let n = m.dim();
        let mut re = Vec::with_capacity(n * n);
        let mut im = Vec::with_capacity(n * n);
        for z in m.data() {
            re.push(z.re);
            im.push(z.im);
        }
        Self { n, re, im }
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.n);
        for (dst, (&re, &im)) in out.data_mut().iter_mut().zip(self.re.iter().zip(&self.im)) {
            *dst = Complex64::new(re, im);
        }
        out
    }

    /// Adjoint (conjugate transpose).
    pub fn adjoint(&self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for r in 0..n {
            for c in 0..n {
                out.re[c * n + r] = self.re[r * n + c];
                out.im[c * n + r] = -self.im[r * n + c];
            }
        }
        out
    }

    /// Rescale so the diagonal sums to one; counters the slow rounding
    /// drift of long trotterized runs (the maps preserve trace exactly in
    /// exact arithmetic).
    pub fn renormalize_trace(&mut self) {
        let tr: f64 = (0..self.n).map(|i| self.re[i * self.n + i]).sum();
        if tr > 0.0 && tr != 1.0 {
            let inv = 1.0 / tr;
            for v in self.re.iter_mut() {
                *v *= inv;
            }
            for v in self.im.iter_mut() {
                *v *= inv;
            }
        }
    }

    /// Replace by the Hermitian part `(m + m†)/2`.
    pub fn hermitize(&mut self) {
        let n = self.n;
        for r in 0..n {
            for c in r + 1..n {
                let (i, j) = (r * n + c, c * n + r);
                let re = 0.5 * (self.re[i] + self.re[j]);
                let im = 0.5 * (self.im[i] - self.im[j]);
                self.re[i] = re;
                self.re[j] = re;
                self.im[i] = im;
                self.im[j] = -im;
            }
            self.im[r * n + r] = 0.0;
        }
    }
}

/// `c = a b` (complex, planar).
///
/// Fused ikj order: the j-loop streams contiguous rows of both planes of
/// `b` and `c`, which the autovectorizer turns into four vector FMA chains.
/// Matrices up to 32x32 live in L1, so no blocking is needed at state size;
/// the 2^10 case used for large registers is rare enough that bandwidth is
/// acceptable.
pub(crate) fn gemm(c: &mut PlanarMatrix, a: &PlanarMatrix, b: &PlanarMatrix) {
    let n = a.n;
    debug_assert!(b.n == n && c.n == n);
    match n {
        32 => gemm_fixed::<32>(c, a, b),
        16 => gemm_fixed::<16>(c, a, b),
        8 => gemm_fixed::<8>(c, a, b),
        _ => gemm_generic(c, a, b),
    }
}

/// Fixed-size kernel: compile-time trip counts let the j-loop unroll into
/// straight vector FMA chains, and the k-loop is processed in pairs to cut
/// the accumulator row traffic in half.
fn gemm_fixed<const N: usize>(c: &mut PlanarMatrix, a: &PlanarMatrix, b: &PlanarMatrix) {
    c.re.fill(0.0);
    c.im.fill(0.0);
    for i in 0..N {
        let c_re: &mut [f64; N] = (&mut c.re[i * N..(i + 1) * N]).try_into().unwrap();
        let c_im: &mut [f64; N] = (&mut c.im[i * N..(i + 1) * N]).try_into().unwrap();
        let a_re = &a.re[i * N..(i + 1) * N];
        let a_im = &a.im[i * N..(i + 1) * N];
        let mut k = 0;
        while k + 2 <= N {
            let (ar0, ai0) = (a_re[k], a_im[k]);
            let (ar1, ai1) = (a_re[k + 1], a_im[k + 1]);
            let b0_re: &[f64; N] = (&b.re[k * N..(k + 1) * N]).try_into().unwrap();
            let b0_im: &[f64; N] = (&b.im[k * N..(k + 1) * N]).try_into().unwrap();
            let b1_re: &[f64; N] = (&b.re[(k + 1) * N..(k + 2) * N]).try_into().unwrap();
            let b1_im: &[f64; N] = (&b.im[(k + 1) * N..(k + 2) * N]).try_into().unwrap();
            for j in 0..N {
                let re = ar0.mul_add(b0_re[j], (-ai0).mul_add(b0_im[j], c_re[j]));
                c_re[j] = ar1.mul_add(b1_re[j], (-ai1).mul_add(b1_im[j], re));
                let im = ar0.mul_add(b0_im[j], ai0.mul_add(b0_re[j], c_im[j]));
                c_im[j] = ar1.mul_add(b1_im[j], ai1.mul_add(b1_re[j], im));
            }
            k += 2;
        }
        if k < N {
            let (ar, ai) = (a_re[k], a_im[k]);
            let b_re: &[f64; N] = (&b.re[k * N..(k + 1) * N]).try_into().unwrap();
            let b_im: &[f64; N] = (&b.im[k * N..(k + 1) * N]).try_into().unwrap();
            for j in 0..N {
                c_re[j] += ar * b_re[j] - ai * b_im[j];
                c_im[j] += ar * b_im[j] + ai * b_re[j];
            }
        }
    }
}

fn gemm_generic(c: &mut PlanarMatrix, a: &PlanarMatrix, b: &PlanarMatrix) {
    let n = a.n;
    c.re.fill(0.0);
    c.im.fill(0.0);
    for i in 0..n {
        let c_re = &mut c.re[i * n..(i + 1) * n];
        let c_im = &mut c.im[i * n..(i + 1) * n];
        let a_re = &a.re[i * n..(i + 1) * n];
        let a_im = &a.im[i * n..(i + 1) * n];
        for k in 0..n {
            let ar = a_re[k];
            let ai = a_im[k];
            let b_re = &b.re[k * n..(k + 1) * n];
            let b_im = &b.im[k * n..(k + 1) * n];
            assert!(b_re.len() == n && b_im.len() == n && c_re.len() == n && c_im.len() == n);
            for j in 0..n {
                c_re[j] += ar * b_re[j] - ai * b_im[j];
                c_im[j] += ar * b_im[j] + ai * b_re[j];
            }
        }
    }
}

/// In-place unitary conjugation `rho ← u rho u†` using one scratch matrix.
///
/// `u_dag` must be the adjoint of `u`; both are cached by callers that apply
/// the same propagator many times.
pub(crate) fn conjugate_in_place(
    rho: &mut PlanarMatrix,
    u: &PlanarMatrix,
    u_dag: &PlanarMatrix,
    scratch: &mut PlanarMatrix,
) {
    gemm(scratch, u, rho);
    gemm(rho, scratch, u_dag);
}

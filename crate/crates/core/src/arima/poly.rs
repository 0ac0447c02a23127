//! Root magnitudes of real polynomials, used to verify that fitted AR/MA
//! polynomials keep their roots outside the unit circle.

#[derive(Debug, Clone, Copy)]
struct Complex {
    re: f64,
    im: f64,
}

impl Complex {
    fn new(re: f64, im: f64) -> Self {
        Self { re, im }
    }

    fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }

    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }

    fn mul(self, o: Self) -> Self {
        Self::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }

    fn div(self, o: Self) -> Self {
        let d = o.re * o.re + o.im * o.im;
        Self::new(
            (self.re * o.re + self.im * o.im) / d,
            (self.im * o.re - self.re * o.im) / d,
        )
    }
}

/// Smallest root magnitude of c₀ + c₁z + … + c_n zⁿ via Durand–Kerner
/// iteration. Returns +∞ for polynomials of degree 0 (no roots).
pub fn min_root_magnitude(coeffs: &[f64]) -> f64 {
    let degree = match coeffs.iter().rposition(|c| *c != 0.0) {
        Some(d) if d > 0 => d,
        _ => return f64::INFINITY,
    };
    let lead = coeffs[degree];
    let monic: Vec<f64> = coeffs[..=degree].iter().map(|c| c / lead).collect();

    let eval = |z: Complex| -> Complex {
        let mut acc = Complex::new(0.0, 0.0);
        for &c in monic.iter().rev() {
            acc = acc.mul(z);
            acc.re += c;
        }
        acc
    };

    // Standard non-real, non-unit-modulus starting points.
    let seed = Complex::new(0.4, 0.9);
    let mut roots: Vec<Complex> = Vec::with_capacity(degree);
    let mut power = Complex::new(1.0, 0.0);
    for _ in 0..degree {
        power = power.mul(seed);
        roots.push(power);
    }

    for _ in 0..200 {
        let mut shift = 0.0f64;
        for i in 0..degree {
            let mut denom = Complex::new(1.0, 0.0);
            for j in 0..degree {
                if i != j {
                    denom = denom.mul(roots[i].sub(roots[j]));
                }
            }
            let delta = eval(roots[i]).div(denom);
            roots[i] = roots[i].sub(delta);
            shift = shift.max(delta.abs());
        }
        if shift < 1e-13 {
            break;
        }
    }

    roots
        .iter()
        .map(|r| r.abs())
        .fold(f64::INFINITY, f64::min)
}

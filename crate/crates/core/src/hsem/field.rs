use crate::lattice::Vec2;

/// A smooth field that can report its mixed partial derivatives.
pub trait SmoothField: Sync {
    /// d1^a d2^b of the field at x.
    fn partial(&self, a: usize, b: usize, x: Vec2) -> f64;

    /// Largest total derivative order a + b the field supports.
    fn max_order(&self) -> usize;

    fn value(&self, x: Vec2) -> f64 {
        self.partial(0, 0, x)
    }
}

/// Physicists' Hermite polynomial H_n(u).
pub fn hermite(n: usize, u: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * u);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let next = 2.0 * u * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// amplitude * exp(-|y - center|^2 / width^2).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianField {
    pub width: f64,
    pub center: Vec2,
    pub amplitude: f64,
}

impl GaussianField {
    pub fn new(width: f64) -> Self {
        assert!(width > 0.0, "Gaussian width must be positive");
        Self {
            width,
            center: [0.0, 0.0],
            amplitude: 1.0,
        }
    }

    pub fn with_center(self, center: Vec2) -> Self {
        Self { center, ..self }
    }

    pub fn with_amplitude(self, amplitude: f64) -> Self {
        Self { amplitude, ..self }
    }

    /// The identically zero field.
    pub fn zero() -> Self {
        Self::new(1.0).with_amplitude(0.0)
    }

    /// |x - center|^2 / width^2
    pub fn scaled_distance_sq(&self, x: Vec2) -> f64 {
        let u = (x[0] - self.center[0]) / self.width;
        let v = (x[1] - self.center[1]) / self.width;
        u * u + v * v
    }
}

impl SmoothField for GaussianField {
    fn partial(&self, a: usize, b: usize, x: Vec2) -> f64 {
        let u = (x[0] - self.center[0]) / self.width;
        let v = (x[1] - self.center[1]) / self.width;
        let scale = (-1.0 / self.width).powi((a + b) as i32);
        self.amplitude * scale * hermite(a, u) * hermite(b, v) * (-(u * u + v * v)).exp()
    }

    fn max_order(&self) -> usize {
        64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hermite_values() {
        assert_eq!(hermite(0, 0.7), 1.0);
        assert_eq!(hermite(2, 0.5), 4.0 * 0.25 - 2.0);
        assert_eq!(hermite(3, 1.0), 8.0 - 12.0);
    }

    #[test]
    fn odd_partials_vanish_at_center() {
        let g = GaussianField::new(2.5).with_center([0.3, -1.0]);
        for a in 0..6 {
            for b in 0..6 {
                if (a + b) % 2 == 1 || a % 2 == 1 || b % 2 == 1 {
                    assert_eq!(g.partial(a, b, g.center), 0.0);
                }
            }
        }
        assert_eq!(g.value(g.center), 1.0);
    }

    /// One derivative order by a fourth-order central stencil.
    fn stencil(f: impl Fn(f64) -> f64, h: f64) -> f64 {
        (f(-2.0 * h) - 8.0 * f(-h) + 8.0 * f(h) - f(2.0 * h)) / (12.0 * h)
    }

    #[test]
    fn partials_match_finite_differences() {
        let g = GaussianField::new(1.7);
        let h = 1e-3;
        for x in [[0.0, 0.0], [1.3, -0.7]] {
            for total in 1..=6usize {
                for a in 0..=total {
                    let b = total - a;
                    // differentiate the next lower analytic partial numerically
                    let fd = if a > 0 {
                        stencil(|s| g.partial(a - 1, b, [x[0] + s, x[1]]), h)
                    } else {
                        stencil(|s| g.partial(a, b - 1, [x[0], x[1] + s]), h)
                    };
                    let exact = g.partial(a, b, x);
                    let scale = exact.abs().max(1e-3);
                    assert!((fd - exact).abs() < 1e-6 * scale, "({a},{b}) at {x:?}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn amplitude_is_linear(amp in -5.0..5.0f64, a in 0usize..6, b in 0usize..6,
                               x in -3.0..3.0f64, y in -3.0..3.0f64) {
            let g = GaussianField::new(1.3);
            let scaled = g.with_amplitude(amp);
            prop_assert!((scaled.partial(a, b, [x, y]) - amp * g.partial(a, b, [x, y])).abs()
                <= 1e-13 * (1.0 + g.partial(a, b, [x, y]).abs() * amp.abs()));
        }
    }
}

//! Quadrature rules: Gauss-Legendre, adaptive Gauss-Kronrod, and symmetric
//! triangle rules used by the finite-element assembly.

/// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton iteration
/// on the Legendre recurrence. Accurate to machine precision for n <= 64.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-like initial guess.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Fixed Gauss-Legendre integration of `f` over [a, b].
pub fn integrate_gl(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let (xs, ws) = gauss_legendre(n);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (x, w) in xs.iter().zip(ws.iter()) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

// 7-point Gauss / 15-point Kronrod pair (QUADPACK constants).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One Gauss-Kronrod 15 panel: returns (integral, error estimate).
fn gk15(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(mid);
    let mut res_g = WG[3] * fc;
    let mut res_k = WGK[7] * fc;
    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = f(mid - x);
        let f2 = f(mid + x);
        res_k += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    res_k *= half;
    res_g *= half;
    (res_k, (res_k - res_g).abs())
}

/// Adaptive integration of `f` over [a, b] to absolute tolerance `tol`,
/// by bisection of the worst panel.
pub fn integrate_adaptive(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (v, e) = gk15(f, a, b);
    // (error, a, b, value); simple vec used as a priority queue by scan.
    let mut panels = vec![(e, a, b, v)];
    let mut total_err = e;
    let mut total_val = v;
    let max_panels = 4000;
    while total_err > tol && panels.len() < max_panels {
        let (idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .0.partial_cmp(&y.1 .0).unwrap())
            .unwrap();
        let (err, pa, pb, val) = panels.swap_remove(idx);
        let mid = 0.5 * (pa + pb);
        if mid <= pa || mid >= pb {
            // Panel no longer splittable in f64; accept it.
            panels.push((0.0, pa, pb, val));
            total_err -= err;
            continue;
        }
        let (v1, e1) = gk15(f, pa, mid);
        let (v2, e2) = gk15(f, mid, pb);
        total_val += v1 + v2 - val;
        total_err += e1 + e2 - err;
        panels.push((e1, pa, mid, v1));
        panels.push((e2, mid, pb, v2));
    }
    total_val
}

/// A symmetric quadrature rule on the reference triangle, stored as
/// barycentric coordinates with weights normalized to sum to one.
pub struct TriangleRule {
    pub points: Vec<[f64; 3]>,
    pub weights: Vec<f64>,
}

/// Degree-6 accurate 12-point rule (Dunavant).
pub fn triangle_rule_d6() -> TriangleRule {
    let mut points = Vec::with_capacity(12);
    let mut weights = Vec::with_capacity(12);
    let mut push3 = |a: f64, b: f64, w: f64| {
        points.push([a, b, b]);
        points.push([b, a, b]);
        points.push([b, b, a]);
        weights.extend_from_slice(&[w, w, w]);
    };
    push3(0.873821971016996, 0.063089014491502, 0.050844906370207);
    push3(0.501426509658179, 0.249286745170910, 0.116786275726379);
    let (a, b, c, w) = (
        0.636502499121399,
        0.310352451033785,
        0.053145049844816,
        0.082851075618374,
    );
    for perm in [[a, b, c], [a, c, b], [b, a, c], [b, c, a], [c, a, b], [c, b, a]] {
        points.push(perm);
        weights.push(w);
    }
    TriangleRule { points, weights }
}

impl TriangleRule {
    /// Integrates `f` over the physical triangle (p0, p1, p2).
    pub fn integrate(
        &self,
        p0: [f64; 2],
        p1: [f64; 2],
        p2: [f64; 2],
        f: &mut dyn FnMut(f64, f64) -> f64,
    ) -> f64 {
        let area = 0.5
            * ((p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1])).abs();
        let mut acc = 0.0;
        for (bc, w) in self.points.iter().zip(self.weights.iter()) {
            let x = bc[0] * p0[0] + bc[1] * p1[0] + bc[2] * p2[0];
            let y = bc[0] * p0[1] + bc[1] * p1[1] + bc[2] * p2[1];
            acc += w * f(x, y);
        }
        acc * area
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        // n-point rule is exact for degree 2n-1.
        let mut f = |x: f64| x.powi(7) + 3.0 * x.powi(4) + 1.0;
        let v = integrate_gl(&mut f, -1.0, 1.0, 4);
        let exact = 2.0 * (3.0 / 5.0 + 1.0);
        assert!((v - exact).abs() < 1e-14, "got {v}, want {exact}");
    }

    #[test]
    fn adaptive_handles_gaussian_tail() {
        let mut f = |x: f64| (-0.5 * x * x).exp();
        let v = integrate_adaptive(&mut f, -40.0, 40.0, 1e-13);
        let exact = (2.0 * std::f64::consts::PI).sqrt();
        assert!((v - exact).abs() < 1e-12, "got {v}, want {exact}");
    }

    #[test]
    fn adaptive_handles_kinks() {
        let mut f = |x: f64| (x - 0.3).abs();
        let v = integrate_adaptive(&mut f, 0.0, 1.0, 1e-12);
        let exact = 0.5 * (0.3f64.powi(2) + 0.7f64.powi(2));
        assert!((v - exact).abs() < 1e-11);
    }

    #[test]
    fn triangle_rule_exact_to_degree_6() {
        let rule = triangle_rule_d6();
        let factorial = |n: i32| (1..=n).map(|k| k as f64).product::<f64>().max(1.0);
        for i in 0..=6i32 {
            for j in 0..=(6 - i) {
                let mut f = |x: f64, y: f64| x.powi(i) * y.powi(j);
                let v = rule.integrate([0.0, 0.0], [1.0, 0.0], [0.0, 1.0], &mut f);
                // int over reference triangle of x^i y^j = i! j! / (i+j+2)!
                let exact = factorial(i) * factorial(j) / factorial(i + j + 2);
                assert!(
                    (v - exact).abs() < 1e-14,
                    "monomial x^{i} y^{j}: got {v}, want {exact}"
                );
            }
        }
    }

    #[test]
    fn triangle_rule_weights_normalized() {
        let rule = triangle_rule_d6();
        let s: f64 = rule.weights.iter().sum();
        assert!((s - 1.0).abs() < 1e-12);
    }
}

/// Magnitude below which a coordinate is pushed away from zero before inversion.
pub const INVERSE_GUARD: f64 = 1e-12;

/// Number of meta-model terms for dimension `d`: `(d^2 + 7d) / 2 + 1`.
pub fn feature_count(d: usize) -> usize {
    (d * d + 7 * d) / 2 + 1
}

/// `[1, x, x^2, x_i x_j (i < j), 1/x, 1/x^2]`.
pub fn feature_map(x: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(feature_count(x.len()));
    feature_map_into(x, &mut out);
    out
}

/// Appends the features of `x` to `out`.
pub fn feature_map_into(x: &[f64], out: &mut Vec<f64>) {
    let d = x.len();
    out.push(1.0);
    out.extend_from_slice(x);
    out.extend(x.iter().map(|v| v * v));
    for i in 0..d {
        for j in i + 1..d {
            out.push(x[i] * x[j]);
        }
    }
    let guarded = |v: f64| {
        if v.abs() < INVERSE_GUARD {
            if v.is_sign_negative() && v != 0.0 {
                -INVERSE_GUARD
            } else {
                INVERSE_GUARD
            }
        } else {
            v
        }
    };
    out.extend(x.iter().map(|&v| 1.0 / guarded(v)));
    out.extend(x.iter().map(|&v| {
        let g = guarded(v);
        1.0 / (g * g)
    }));
}

/// Same function space as [`feature_map_into`], with the polynomial terms
/// taken in `z = (x - center) / scale`. The inverse terms stay in `x`.
pub fn centered_feature_map_into(x: &[f64], center: &[f64], scale: &[f64], out: &mut Vec<f64>) {
    let d = x.len();
    let start = out.len();
    out.push(1.0);
    out.extend(x.iter().zip(center).zip(scale).map(|((v, c), s)| (v - c) / s));
    for i in 0..d {
        let z = out[start + 1 + i];
        out.push(z * z);
    }
    for i in 0..d {
        for j in i + 1..d {
            out.push(out[start + 1 + i] * out[start + 1 + j]);
        }
    }
    let mut raw = Vec::with_capacity(feature_count(d));
    feature_map_into(x, &mut raw);
    out.extend_from_slice(&raw[raw.len() - 2 * d..]);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lengths() {
        assert_eq!(feature_count(10), 86);
        assert_eq!(feature_count(20), 271);
        assert_eq!(feature_map(&[0.5; 10]).len(), 86);
    }

    #[test]
    fn two_dimensional_hand_values() {
        assert_eq!(
            feature_map(&[1.0, 2.0]),
            vec![1.0, 1.0, 2.0, 1.0, 4.0, 2.0, 1.0, 0.5, 1.0, 0.25]
        );
    }

    #[test]
    fn zero_is_guarded() {
        let f = feature_map(&[0.0, -0.0, -1e-13]);
        assert!(f.iter().all(|v| v.is_finite()));
        let inv = &f[f.len() - 6..f.len() - 3];
        assert_eq!(inv, &[1e12, 1e12, -1e12]);
    }

    #[test]
    fn centered_map_with_unit_frame_is_plain() {
        let x = [1.5, -2.0, 3.0];
        let mut out = Vec::new();
        centered_feature_map_into(&x, &[0.0; 3], &[1.0; 3], &mut out);
        assert_eq!(out, feature_map(&x));
        out.clear();
        centered_feature_map_into(&[3.0, 1.0], &[1.0, 1.0], &[2.0, 1.0], &mut out);
        assert_eq!(out, vec![1.0, 1.0, 0.0, 1.0, 0.0, 0.0, 1.0 / 3.0, 1.0, 1.0 / 9.0, 1.0]);
    }
}

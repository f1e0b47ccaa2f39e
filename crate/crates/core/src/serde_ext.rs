//! Serialization helpers for values JSON cannot carry natively.

/// Writes non-finite floats as the strings `"inf"`, `"-inf"` or `"nan"`.
pub fn extended_f64<S: serde::Serializer>(x: &f64, s: S) -> core::result::Result<S::Ok, S::Error> {
    if x.is_finite() {
        s.serialize_f64(*x)
    } else if x.is_nan() {
        s.serialize_str("nan")
    } else if *x > 0.0 {
        s.serialize_str("inf")
    } else {
        s.serialize_str("-inf")
    }
}

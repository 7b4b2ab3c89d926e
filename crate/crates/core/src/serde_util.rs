//! Serialization helpers: exact quantities are emitted as decimal strings.

use std::fmt::Display;

use serde::ser::{SerializeSeq, Serializer};

pub fn as_string<T: Display, S: Serializer>(value: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(value)
}

pub fn bigints_as_strings<T: Display, S: Serializer>(values: &[T], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(values.len()))?;
    for v in values {
        seq.serialize_element(&v.to_string())?;
    }
    seq.end()
}

//! Serde adapters that write 0-based indices as 1-based numbers.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

fn lower<E: serde::de::Error>(q: usize) -> Result<usize, E> {
    q.checked_sub(1).ok_or_else(|| E::custom("variable indices are 1-based"))
}

pub mod one_based {
    use super::*;

    pub fn serialize<S: Serializer>(q: &usize, s: S) -> Result<S::Ok, S::Error> {
        (q + 1).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<usize, D::Error> {
        lower(usize::deserialize(d)?)
    }
}

pub mod one_based_vec {
    use super::*;

    pub fn serialize<S: Serializer>(qs: &[usize], s: S) -> Result<S::Ok, S::Error> {
        qs.iter().map(|q| q + 1).collect::<Vec<_>>().serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<usize>, D::Error> {
        Vec::<usize>::deserialize(d)?.into_iter().map(lower).collect()
    }
}

pub mod one_based_opt_vec {
    use super::*;

    pub fn serialize<S: Serializer>(qs: &Option<Vec<usize>>, s: S) -> Result<S::Ok, S::Error> {
        qs.as_ref().map(|v| v.iter().map(|q| q + 1).collect::<Vec<_>>()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Vec<usize>>, D::Error> {
        Option::<Vec<usize>>::deserialize(d)?.map(|v| v.into_iter().map(lower).collect()).transpose()
    }
}

//! Serde adapters writing arbitrary-precision integers as exact JSON numbers.

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Number;

fn to_number<E: serde::ser::Error>(x: &BigInt) -> Result<Number, E> {
    x.to_string().parse().map_err(E::custom)
}

fn from_number<E: serde::de::Error>(n: &Number) -> Result<BigInt, E> {
    let text = n.to_string();
    text.parse()
        .map_err(|_| E::custom(format!("expected an integer, found {text}")))
}

pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    to_number::<S::Error>(x)?.serialize(s)
}

pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
    from_number(&Number::deserialize(d)?)
}

pub mod vec {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        xs.iter()
            .map(to_number::<S::Error>)
            .collect::<Result<Vec<_>, _>>()?
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        Vec::<Number>::deserialize(d)?
            .iter()
            .map(from_number)
            .collect()
    }
}

pub mod rows {
    use super::*;

    pub fn serialize<S: Serializer>(rows: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        rows.iter()
            .map(|r| r.iter().map(to_number::<S::Error>).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        Vec::<Vec<Number>>::deserialize(d)?
            .iter()
            .map(|r| r.iter().map(from_number).collect())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[derive(Serialize, Deserialize, PartialEq, Debug)]
    struct Wrap {
        #[serde(with = "super")]
        x: BigInt,
        #[serde(with = "super::vec")]
        xs: Vec<BigInt>,
    }

    #[test]
    fn large_values_survive_json() {
        let big: BigInt = "123456789012345678901234567890".parse().unwrap();
        let w = Wrap {
            x: -big.clone(),
            xs: vec![big, BigInt::from(0)],
        };
        let text = serde_json::to_string(&w).unwrap();
        assert_eq!(
            text,
            r#"{"x":-123456789012345678901234567890,"xs":[123456789012345678901234567890,0]}"#
        );
        assert_eq!(serde_json::from_str::<Wrap>(&text).unwrap(), w);
    }

    #[test]
    fn rejects_fractions() {
        assert!(serde_json::from_str::<Wrap>(r#"{"x":1.5,"xs":[]}"#).is_err());
    }
}

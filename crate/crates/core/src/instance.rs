//! JSON interchange for decoding instances. Elements of `F_{q^m}` are written
//! as arrays of `m` base-field digits, constant coefficient first.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channel::sample_instance;
use crate::error::{Error, Result};
use crate::ffield::{ExtElement, Field, FieldTower};
use crate::gabidulin::GabidulinCode;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub q: u32,
    pub m: usize,
    /// `m + 1` coefficients of the monic modulus, constant term first.
    pub modulus: Vec<u32>,
    pub n: usize,
    pub k: usize,
    pub g: Vec<Vec<u32>>,
    pub r: Vec<Vec<u32>>,
    pub w: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub msg: Option<Vec<Vec<u32>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e: Option<Vec<Vec<u32>>>,
}

/// A parsed and validated instance.
#[derive(Clone, Debug)]
pub struct Instance {
    pub code: GabidulinCode,
    pub r: Vec<ExtElement>,
    pub w: usize,
    pub msg: Option<Vec<ExtElement>>,
    pub e: Option<Vec<ExtElement>>,
}

fn decode_vector(tower: &FieldTower, digits: &[Vec<u32>], len: usize) -> Result<Vec<ExtElement>> {
    if digits.len() != len {
        return Err(Error::LengthMismatch {
            expected: len,
            got: digits.len(),
        });
    }
    digits.iter().map(|d| tower.from_coeffs(d)).collect()
}

fn encode_vector(tower: &FieldTower, v: &[ExtElement]) -> Vec<Vec<u32>> {
    v.iter().map(|&x| tower.coeffs(x)).collect()
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidParams(format!("malformed instance: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    pub fn into_instance(self) -> Result<Instance> {
        if self.modulus.len() != self.m + 1 {
            return Err(Error::BadModulus { expected: self.m });
        }
        let tower = Arc::new(FieldTower::with_modulus(self.q, self.modulus)?);
        let g = decode_vector(&tower, &self.g, self.n)?;
        let code = GabidulinCode::new(Arc::clone(&tower), g, self.k)?;
        let r = decode_vector(&tower, &self.r, self.n)?;
        if self.w > self.n {
            return Err(Error::InvalidParams(format!("w = {} exceeds n = {}", self.w, self.n)));
        }
        let msg = self.msg.map(|m| decode_vector(&tower, &m, self.k)).transpose()?;
        let e = self.e.map(|e| decode_vector(&tower, &e, self.n)).transpose()?;
        if let (Some(msg), Some(e)) = (&msg, &e) {
            let expected: Vec<_> = code
                .encode(msg)?
                .iter()
                .zip(e)
                .map(|(&c, &x)| tower.add(c, x))
                .collect();
            if expected != r {
                return Err(Error::InvalidParams("r differs from encode(msg) + e".into()));
            }
        }
        Ok(Instance {
            code,
            r,
            w: self.w,
            msg,
            e,
        })
    }
}

impl Instance {
    /// Uniform message and uniform rank-`w` error on `code`.
    pub fn random<R: Rng + ?Sized>(code: &GabidulinCode, w: usize, rng: &mut R) -> Result<Self> {
        let inst = sample_instance(code, w, rng)?;
        Ok(Self {
            code: code.clone(),
            r: inst.r,
            w,
            msg: Some(inst.msg),
            e: Some(inst.e),
        })
    }

    pub fn to_file(&self) -> InstanceFile {
        let tower = self.code.tower();
        InstanceFile {
            q: tower.q(),
            m: tower.m(),
            modulus: tower.modulus().to_vec(),
            n: self.code.n(),
            k: self.code.k(),
            g: encode_vector(tower, self.code.locators()),
            r: encode_vector(tower, &self.r),
            w: self.w,
            msg: self.msg.as_ref().map(|m| encode_vector(tower, m)),
            e: self.e.as_ref().map(|e| encode_vector(tower, e)),
        }
    }
}

use base64::engine::general_purpose::STANDARD;
use base64::Engine;
use serde::{Deserialize, Serialize};

use crate::bits::BitString;
use crate::error::{Error, Result};
use crate::quantum::DensityMatrix;

/// A classical tag together with the padded quantum payload. The payload may
/// carry side registers besides the encrypted one, named by `register`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ciphertext {
    pub tag: BitString,
    pub register: String,
    pub payload: DensityMatrix,
}

impl Ciphertext {
    /// The joint state `|tag><tag| (x) payload` with the tag held in register
    /// `tag_register`, for roles that want the tag as qubits. Only practical
    /// for short tags.
    pub fn joint_state(&self, tag_register: &str) -> Result<DensityMatrix> {
        DensityMatrix::basis(tag_register, &self.tag).tensor(&self.payload)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string(self).map_err(|e| Error::Serialization(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Serialization(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
struct Wire {
    tag: String,
    tag_bits: usize,
    register: String,
    payload: DensityMatrix,
}

impl Serialize for Ciphertext {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        Wire {
            tag: STANDARD.encode(self.tag.to_bytes()),
            tag_bits: self.tag.len(),
            register: self.register.clone(),
            payload: self.payload.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Ciphertext {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let w = Wire::deserialize(deserializer)?;
        let bytes = STANDARD.decode(&w.tag).map_err(D::Error::custom)?;
        let tag = BitString::from_bytes(&bytes, w.tag_bits).map_err(D::Error::custom)?;
        if !w.payload.has_register(&w.register) {
            return Err(D::Error::custom(format!("payload has no register `{}`", w.register)));
        }
        Ok(Ciphertext { tag, register: w.register, payload: w.payload })
    }
}

//! Scene files: a JSON document holding the field tag, tangency data, the
//! free-coefficient map keyed by monomial strings, `t`, the seed, the zeta
//! choice, and the designated cube roots. Tool-written files round-trip
//! byte-exactly.

use std::collections::BTreeMap;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::field::{parse_scalar, Eis, Field, Fp, Scalar};
use crate::scene::{
    build_scene_with, monomial_key, Scene, SceneError, SceneParams, TParam, FREE_MONOMIALS,
};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct SceneFile {
    pub field: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
    pub tangency1: [String; 3],
    pub tangency2: [String; 3],
    pub free_coeffs: BTreeMap<String, String>,
    pub t: String,
    pub seed: u64,
    pub zeta: String,
    pub u0: String,
    pub u0_prime: String,
}

/// A scene over whichever field the file declared.
pub enum LoadedScene {
    Eisenstein(Box<Scene<Eis>>),
    Prime(Box<Scene<Fp>>),
}

/// Field-specific encode/decode used by scene files.
pub trait FileField: Field {
    const TAG: &'static str;
    fn file_modulus(&self) -> Option<u64>;
    fn from_scalar(s: &Scalar) -> Result<Self, SceneError>;
}

impl FileField for Eis {
    const TAG: &'static str = "eisenstein";

    fn file_modulus(&self) -> Option<u64> {
        None
    }

    fn from_scalar(s: &Scalar) -> Result<Self, SceneError> {
        match s {
            Scalar::Rational(r) => Ok(Eis::from_rat(r.clone())),
            Scalar::Eisenstein(e) => Ok(e.clone()),
            Scalar::PrimeField(_) => Err(SceneError::IdentityCheckFailed(format!(
                "prime-field scalar {s} in an eisenstein scene"
            ))),
        }
    }
}

impl FileField for Fp {
    const TAG: &'static str = "fp";

    fn file_modulus(&self) -> Option<u64> {
        Some(self.modulus())
    }

    fn from_scalar(s: &Scalar) -> Result<Self, SceneError> {
        match s {
            Scalar::PrimeField(f) => Ok(*f),
            _ => Err(SceneError::IdentityCheckFailed(format!(
                "scalar {s} is not a prime-field element"
            ))),
        }
    }
}

fn decode<K: FileField>(text: &str) -> Result<K, SceneError> {
    let s = parse_scalar(text).map_err(SceneError::Field)?;
    K::from_scalar(&s)
}

fn monomial_from_key(key: &str) -> Option<[u8; 4]> {
    FREE_MONOMIALS
        .iter()
        .find(|m| monomial_key(m) == key)
        .copied()
}

impl SceneFile {
    pub fn from_scene<K: FileField>(scene: &Scene<K>) -> Self {
        let params = scene.params();
        let enc3 = |t: &(K, K, K)| [t.0.encode(), t.1.encode(), t.2.encode()];
        SceneFile {
            field: K::TAG.to_string(),
            modulus: scene.u0().file_modulus(),
            tangency1: enc3(&params.tangency1),
            tangency2: enc3(&params.tangency2),
            free_coeffs: params
                .free_coeffs
                .iter()
                .map(|(m, v)| (monomial_key(m), v.encode()))
                .collect(),
            t: match &params.t {
                TParam::Symbolic => "symbolic".to_string(),
                TParam::Value(v) => v.encode(),
            },
            seed: params.seed,
            zeta: scene.zeta().encode(),
            u0: scene.u0().encode(),
            u0_prime: scene.u0_prime().encode(),
        }
    }

    fn params_as<K: FileField>(&self) -> Result<(SceneParams<K>, K, K), SceneError> {
        let t1 = (
            decode::<K>(&self.tangency1[0])?,
            decode::<K>(&self.tangency1[1])?,
            decode::<K>(&self.tangency1[2])?,
        );
        let t2 = (
            decode::<K>(&self.tangency2[0])?,
            decode::<K>(&self.tangency2[1])?,
            decode::<K>(&self.tangency2[2])?,
        );
        let mut free = BTreeMap::new();
        for (k, v) in &self.free_coeffs {
            let m = monomial_from_key(k).ok_or_else(|| {
                SceneError::IdentityCheckFailed(format!("unknown free monomial key {k:?}"))
            })?;
            free.insert(m, decode::<K>(v)?);
        }
        let t = if self.t == "symbolic" {
            TParam::Symbolic
        } else {
            TParam::Value(decode::<K>(&self.t)?)
        };
        let params = SceneParams {
            tangency1: t1,
            tangency2: t2,
            free_coeffs: free,
            t,
            seed: self.seed,
        };
        let zeta = decode::<K>(&self.zeta)?;
        let u0 = decode::<K>(&self.u0)?;
        Ok((params, u0, zeta))
    }

    /// Rebuilds and revalidates the scene the file describes.
    pub fn load(&self) -> Result<LoadedScene, SceneError> {
        match self.field.as_str() {
            "eisenstein" => {
                let (params, u0, zeta) = self.params_as::<Eis>()?;
                let scene = build_scene_with(params, Some(u0), Some(zeta))?;
                Ok(LoadedScene::Eisenstein(Box::new(scene)))
            }
            "fp" => {
                let (params, u0, zeta) = self.params_as::<Fp>()?;
                let scene = build_scene_with(params, Some(u0), Some(zeta))?;
                Ok(LoadedScene::Prime(Box::new(scene)))
            }
            other => Err(SceneError::IdentityCheckFailed(format!(
                "unknown field tag {other:?}"
            ))),
        }
    }

    /// Canonical serialization (pretty JSON plus trailing newline).
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("serializable");
        s.push('\n');
        s
    }

    pub fn parse_json(text: &str) -> Result<Self, SceneError> {
        serde_json::from_str(text)
            .map_err(|e| SceneError::IdentityCheckFailed(format!("scene file parse: {e}")))
    }

    /// SHA-256 of the canonical serialization, the scene fingerprint quoted
    /// in reports.
    pub fn fingerprint(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.to_json_string().as_bytes());
        let digest = hasher.finalize();
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Parses a rational from the scalar grammar, used for hyperplane vectors
/// supplied on the command line.
pub fn parse_rational_coord(text: &str) -> Result<BigRational, SceneError> {
    match parse_scalar(text).map_err(SceneError::Field)? {
        Scalar::Rational(r) => Ok(r),
        other => Err(SceneError::IdentityCheckFailed(format!(
            "expected a rational coordinate, got {other}"
        ))),
    }
}

//! Quantum encryption schemes behind one interface: the PRF-based symmetric
//! scheme, the trapdoor-permutation public-key scheme, and reference schemes
//! (broken and idealized) used to calibrate the games.

mod ciphertext;
mod ideal;
mod pke;
mod ske;


pub use ciphertext::Ciphertext;
pub use ideal::{FixedKeyScheme, IdealPkeKey, IdealizedPke, IdentityScheme, RandomFunctionSke};
pub use pke::{pke_decryption_pad, TowpPke, TowpSecretKey};
pub use ske::{ConstantPrfSke, PrfSke, QprfSke};

use crate::classical::TowpIndex;
use crate::coins::CoinSource;
use crate::error::{Error, Result};
use crate::quantum::DensityMatrix;

/// Symmetric-key tag ciphertext.
pub type SkeCiphertext = Ciphertext;

/// Public-key tag ciphertext.
pub type PkeCiphertext = Ciphertext;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Flavor {
    Symmetric,
    Public,
}

/// What every role of a game is handed before it runs: nothing in the
/// symmetric setting, the permutation index in the public-key setting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PublicKey {
    None,
    Towp(TowpIndex),
}

pub trait QuantumEncryptionScheme: Send + Sync {
    type EncKey: Clone + Send + Sync;
    type DecKey: Clone + Send + Sync;

    fn id(&self) -> &str;

    fn flavor(&self) -> Flavor;

    /// Qubits in a plaintext register.
    fn plaintext_qubits(&self) -> usize;

    fn keygen(&self, coins: &mut dyn CoinSource) -> Result<(Self::EncKey, Self::DecKey)>;

    fn public_key(&self, ek: &Self::EncKey) -> PublicKey;

    /// An encryption key rebuilt from public information alone, as a
    /// public-key simulator would. Symmetric schemes have none.
    fn encryption_key_from_public(&self, pk: &PublicKey) -> Result<Self::EncKey> {
        let _ = pk;
        Err(Error::Unsupported(format!("`{}` has no public encryption key", self.id())))
    }

    /// Encrypts register `register` of `state`, leaving the other registers
    /// alone.
    fn encrypt_register(
        &self,
        ek: &Self::EncKey,
        state: &DensityMatrix,
        register: &str,
        coins: &mut dyn CoinSource,
    ) -> Result<Ciphertext>;

    /// Decrypts the ciphertext's payload register. The concrete schemes ignore
    /// `coins`; idealized ones draw lazily sampled function values from it.
    fn decrypt_register(&self, dk: &Self::DecKey, c: &Ciphertext, coins: &mut dyn CoinSource) -> Result<DensityMatrix>;

    /// Encrypts a state held in a single register.
    fn encrypt(&self, ek: &Self::EncKey, state: &DensityMatrix, coins: &mut dyn CoinSource) -> Result<Ciphertext> {
        match state.layout() {
            [only] => {
                let name = only.name.clone();
                self.encrypt_register(ek, state, &name, coins)
            }
            _ => Err(Error::DimensionMismatch("encrypt expects a single-register state".into())),
        }
    }

    fn decrypt(&self, dk: &Self::DecKey, c: &Ciphertext, coins: &mut dyn CoinSource) -> Result<DensityMatrix> {
        self.decrypt_register(dk, c, coins)
    }

    fn check_register(&self, state: &DensityMatrix, register: &str) -> Result<()> {
        let qubits = state.register_qubits(register)?;
        if qubits != self.plaintext_qubits() {
            return Err(Error::DimensionMismatch(format!(
                "`{}` encrypts {} qubits, register `{register}` has {qubits}",
                self.id(),
                self.plaintext_qubits()
            )));
        }
        Ok(())
    }
}

/// `Dec_dk o Enc_ek` as a channel on one register, for Choi-state checks.
pub fn round_trip<'a, S: QuantumEncryptionScheme>(
    scheme: &'a S,
    ek: &'a S::EncKey,
    dk: &'a S::DecKey,
) -> impl Fn(&DensityMatrix, &str, &mut dyn CoinSource) -> Result<DensityMatrix> + 'a {
    move |state, target, coins| {
        let c = scheme.encrypt_register(ek, state, target, coins)?;
        scheme.decrypt_register(dk, &c, coins)
    }
}

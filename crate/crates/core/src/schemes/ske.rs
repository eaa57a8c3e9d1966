use super::{Ciphertext, Flavor, PublicKey, QuantumEncryptionScheme};
use crate::bits::BitString;
use crate::classical::{ConstantZeroPrf, GgmPrf, Prf};
use crate::coins::CoinSource;
use crate::error::{Error, Result};
use crate::quantum::{apply_pauli, DensityMatrix, PauliKey};

/// `Enc_k(rho) = |r><r| (x) P_{f_k(r)} rho P_{f_k(r)}` for fresh uniform `r`.
#[derive(Clone, Debug)]
pub struct PrfSke<P> {
    prf: P,
    qubits: usize,
    id: &'static str,
}

/// The symmetric scheme over the GGM function.
pub type QprfSke = PrfSke<GgmPrf>;

/// The symmetric scheme over the all-zero function (insecure).
pub type ConstantPrfSke = PrfSke<ConstantZeroPrf>;

impl PrfSke<GgmPrf> {
    pub fn new(qubits: usize) -> Result<Self> {
        PrfSke::with_prf(GgmPrf::for_scheme(qubits)?, "qprf-ske")
    }
}

impl PrfSke<ConstantZeroPrf> {
    pub fn constant(qubits: usize) -> Result<Self> {
        PrfSke::with_prf(ConstantZeroPrf::for_scheme(qubits), "const-prf-ske")
    }
}

impl<P: Prf> PrfSke<P> {
    /// Requires `f : {0,1}^n x {0,1}^{2n} -> {0,1}^{2n}`.
    pub fn with_prf(prf: P, id: &'static str) -> Result<Self> {
        let n = prf.key_len();
        if n == 0 || prf.in_len() != 2 * n || prf.out_len() != 2 * n {
            return Err(Error::OutOfRange(format!(
                "PRF shape {} x {} -> {} does not match n x 2n -> 2n",
                prf.key_len(),
                prf.in_len(),
                prf.out_len()
            )));
        }
        Ok(PrfSke { prf, qubits: n, id })
    }

    pub fn prf(&self) -> &P {
        &self.prf
    }

    fn pad(&self, key: &BitString, tag: &BitString) -> Result<PauliKey> {
        if tag.len() != 2 * self.qubits {
            return Err(Error::InvalidCiphertext(format!("tag of {} bits, expected {}", tag.len(), 2 * self.qubits)));
        }
        PauliKey::new(self.prf.eval(key, tag)?)
    }
}

impl<P: Prf> QuantumEncryptionScheme for PrfSke<P> {
    type EncKey = BitString;
    type DecKey = BitString;

    fn id(&self) -> &str {
        self.id
    }

    fn flavor(&self) -> Flavor {
        Flavor::Symmetric
    }

    fn plaintext_qubits(&self) -> usize {
        self.qubits
    }

    fn keygen(&self, coins: &mut dyn CoinSource) -> Result<(BitString, BitString)> {
        let k = coins.bits(self.qubits);
        Ok((k.clone(), k))
    }

    fn public_key(&self, _ek: &BitString) -> PublicKey {
        PublicKey::None
    }

    fn encrypt_register(
        &self,
        ek: &BitString,
        state: &DensityMatrix,
        register: &str,
        coins: &mut dyn CoinSource,
    ) -> Result<Ciphertext> {
        self.check_register(state, register)?;
        let r = coins.bits(2 * self.qubits);
        let payload = apply_pauli(&self.pad(ek, &r)?, state, register)?;
        Ok(Ciphertext { tag: r, register: register.to_string(), payload })
    }

    fn decrypt_register(&self, dk: &BitString, c: &Ciphertext, _coins: &mut dyn CoinSource) -> Result<DensityMatrix> {
        apply_pauli(&self.pad(dk, &c.tag)?, &c.payload, &c.register)
    }
}

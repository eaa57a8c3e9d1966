use super::{Ciphertext, Flavor, PublicKey, QuantumEncryptionScheme};
use crate::bits::BitString;
use crate::classical::{prg_iterated, ToyRsaFamily, TowpIndex, TowpKeyPair, Trapdoor};
use crate::coins::CoinSource;
use crate::error::{Error, Result};
use crate::quantum::{apply_pauli, DensityMatrix, PauliKey};

/// Smallest modulus the public-key scheme uses.
const MIN_SCHEME_MODULUS_BITS: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowpSecretKey {
    pub index: TowpIndex,
    pub trapdoor: Trapdoor,
}

impl From<TowpKeyPair> for TowpSecretKey {
    fn from(kp: TowpKeyPair) -> Self {
        TowpSecretKey { index: kp.index, trapdoor: kp.trapdoor }
    }
}

/// `Enc_i(rho) = |f_i^{2n}(d)><f_i^{2n}(d)| (x) P_r rho P_r` with `d <- S(i)`
/// and `r = G(d)`; decryption recovers `r` bit by bit as `b(I^j(s))`.
#[derive(Clone, Debug)]
pub struct TowpPke {
    qubits: usize,
    family: ToyRsaFamily,
}

impl TowpPke {
    pub fn new(qubits: usize) -> Result<Self> {
        if qubits == 0 {
            return Err(Error::OutOfRange("at least one plaintext qubit".into()));
        }
        TowpPke::with_modulus_bits(qubits, Self::modulus_bits(qubits))
    }

    pub fn with_modulus_bits(qubits: usize, bits: usize) -> Result<Self> {
        if bits < 2 * qubits + 2 {
            return Err(Error::OutOfRange(format!("{bits}-bit modulus is too small for {qubits} qubits")));
        }
        Ok(TowpPke { qubits, family: ToyRsaFamily::new(bits)? })
    }

    /// Default modulus width: at least `2n + 2` bits and never below ten.
    pub fn modulus_bits(qubits: usize) -> usize {
        (2 * qubits + 2).max(MIN_SCHEME_MODULUS_BITS)
    }

    pub fn family(&self) -> &ToyRsaFamily {
        &self.family
    }

    /// The pad `G(d)` and tag `f_i^{2n}(d)` for seed `d`.
    pub fn pad_and_tag(&self, index: &TowpIndex, d: u64) -> Result<(BitString, u64)> {
        let r = prg_iterated(index, d, 2 * self.qubits)?;
        Ok((r, index.iterate(d, 2 * self.qubits)?))
    }
}

/// `u_j = b(I^j(s, t))` for `j = 1..=len`.
pub fn pke_decryption_pad(sk: &TowpSecretKey, s: u64, len: usize) -> Result<BitString> {
    let mut bits = Vec::with_capacity(len);
    let mut x = s;
    for _ in 0..len {
        x = sk.trapdoor.invert(x)?;
        bits.push(sk.index.hardcore(x)?);
    }
    Ok(BitString::new(bits))
}

impl QuantumEncryptionScheme for TowpPke {
    type EncKey = TowpIndex;
    type DecKey = TowpSecretKey;

    fn id(&self) -> &str {
        "qtowp-pke"
    }

    fn flavor(&self) -> Flavor {
        Flavor::Public
    }

    fn plaintext_qubits(&self) -> usize {
        self.qubits
    }

    fn keygen(&self, coins: &mut dyn CoinSource) -> Result<(TowpIndex, TowpSecretKey)> {
        let kp = self.family.generate(coins);
        Ok((kp.index.clone(), kp.into()))
    }

    fn public_key(&self, ek: &TowpIndex) -> PublicKey {
        PublicKey::Towp(ek.clone())
    }

    fn encryption_key_from_public(&self, pk: &PublicKey) -> Result<TowpIndex> {
        match pk {
            PublicKey::Towp(index) => Ok(index.clone()),
            PublicKey::None => Err(Error::Mode("public-key scheme handed an empty public key".into())),
        }
    }

    fn encrypt_register(
        &self,
        ek: &TowpIndex,
        state: &DensityMatrix,
        register: &str,
        coins: &mut dyn CoinSource,
    ) -> Result<Ciphertext> {
        self.check_register(state, register)?;
        let d = ek.sample(coins);
        let (r, s) = self.pad_and_tag(ek, d)?;
        let payload = apply_pauli(&PauliKey::new(r)?, state, register)?;
        Ok(Ciphertext { tag: ek.encode(s)?, register: register.to_string(), payload })
    }

    fn decrypt_register(&self, dk: &TowpSecretKey, c: &Ciphertext, _coins: &mut dyn CoinSource) -> Result<DensityMatrix> {
        let s = dk.index.decode(&c.tag).map_err(|e| Error::InvalidCiphertext(e.to_string()))?;
        let u = pke_decryption_pad(dk, s, 2 * self.qubits)?;
        apply_pauli(&PauliKey::new(u)?, &c.payload, &c.register)
    }
}

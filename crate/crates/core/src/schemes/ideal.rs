use super::pke::TowpPke;
use super::{Ciphertext, Flavor, PublicKey, QuantumEncryptionScheme};
use crate::classical::{FunctionOracle, RandomFunctionOracle, SharedRandomFunction, ToyRsaFamily, TowpIndex, TowpKeyPair};
use crate::coins::CoinSource;
use crate::error::{Error, Result};
use crate::quantum::{apply_pauli, DensityMatrix, PauliKey};

/// Leaves the plaintext untouched and attaches an empty tag. Completely
/// insecure; used as the positive control of every game.
#[derive(Clone, Debug)]
pub struct IdentityScheme {
    qubits: usize,
}

impl IdentityScheme {
    pub fn new(qubits: usize) -> Self {
        IdentityScheme { qubits }
    }
}

impl QuantumEncryptionScheme for IdentityScheme {
    type EncKey = ();
    type DecKey = ();

    fn id(&self) -> &str {
        "identity"
    }

    fn flavor(&self) -> Flavor {
        Flavor::Symmetric
    }

    fn plaintext_qubits(&self) -> usize {
        self.qubits
    }

    fn keygen(&self, _coins: &mut dyn CoinSource) -> Result<((), ())> {
        Ok(((), ()))
    }

    fn public_key(&self, _ek: &()) -> PublicKey {
        PublicKey::None
    }

    fn encrypt_register(
        &self,
        _ek: &(),
        state: &DensityMatrix,
        register: &str,
        _coins: &mut dyn CoinSource,
    ) -> Result<Ciphertext> {
        self.check_register(state, register)?;
        Ok(Ciphertext { tag: Default::default(), register: register.to_string(), payload: state.clone() })
    }

    fn decrypt_register(&self, _dk: &(), c: &Ciphertext, _coins: &mut dyn CoinSource) -> Result<DensityMatrix> {
        Ok(c.payload.clone())
    }
}

fn lazy_pad(phi: &SharedRandomFunction, tag: &crate::bits::BitString, coins: &mut dyn CoinSource) -> Result<PauliKey> {
    let mut phi = phi.clone();
    PauliKey::new(phi.query(tag, coins)?)
}

/// The symmetric scheme with its PRF replaced by a truly random function
/// `phi : {0,1}^{2n} -> {0,1}^{2n}`, sampled lazily. The key is the function
/// itself, shared between the encryption and decryption handles.
#[derive(Clone, Debug)]
pub struct RandomFunctionSke {
    qubits: usize,
}

impl RandomFunctionSke {
    pub fn new(qubits: usize) -> Self {
        RandomFunctionSke { qubits }
    }
}

impl QuantumEncryptionScheme for RandomFunctionSke {
    type EncKey = SharedRandomFunction;
    type DecKey = SharedRandomFunction;

    fn id(&self) -> &str {
        "ideal-ske"
    }

    fn flavor(&self) -> Flavor {
        Flavor::Symmetric
    }

    fn plaintext_qubits(&self) -> usize {
        self.qubits
    }

    fn keygen(&self, _coins: &mut dyn CoinSource) -> Result<(SharedRandomFunction, SharedRandomFunction)> {
        let phi = RandomFunctionOracle::new(2 * self.qubits, 2 * self.qubits).shared();
        Ok((phi.clone(), phi))
    }

    fn public_key(&self, _ek: &SharedRandomFunction) -> PublicKey {
        PublicKey::None
    }

    fn encrypt_register(
        &self,
        ek: &SharedRandomFunction,
        state: &DensityMatrix,
        register: &str,
        coins: &mut dyn CoinSource,
    ) -> Result<Ciphertext> {
        self.check_register(state, register)?;
        let r = coins.bits(2 * self.qubits);
        let payload = apply_pauli(&lazy_pad(ek, &r, coins)?, state, register)?;
        Ok(Ciphertext { tag: r, register: register.to_string(), payload })
    }

    fn decrypt_register(
        &self,
        dk: &SharedRandomFunction,
        c: &Ciphertext,
        coins: &mut dyn CoinSource,
    ) -> Result<DensityMatrix> {
        if c.tag.len() != 2 * self.qubits {
            return Err(Error::InvalidCiphertext(format!("tag of {} bits", c.tag.len())));
        }
        apply_pauli(&lazy_pad(dk, &c.tag, coins)?, &c.payload, &c.register)
    }
}

#[derive(Clone, Debug)]
pub struct IdealPkeKey {
    pub index: TowpIndex,
    pub phi: SharedRandomFunction,
}

/// The public-key scheme with `G(d)` replaced by uniform randomness: tags are
/// still `f_i^{2n}(d)`, and the pad is a lazily sampled random function of
/// the tag, so fresh encryptions get fresh uniform pads and decryption still
/// works.
#[derive(Clone, Debug)]
pub struct IdealizedPke {
    qubits: usize,
    family: ToyRsaFamily,
    pinned: Option<TowpKeyPair>,
}

impl IdealizedPke {
    pub fn new(qubits: usize) -> Result<Self> {
        let family = ToyRsaFamily::new(TowpPke::modulus_bits(qubits))?;
        Ok(IdealizedPke { qubits, family, pinned: None })
    }

    /// Always uses the permutation `kp`, so exact enumeration need not range
    /// over key generation.
    pub fn with_keypair(qubits: usize, kp: TowpKeyPair) -> Result<Self> {
        let family = ToyRsaFamily::new(kp.index.width())?;
        Ok(IdealizedPke { qubits, family, pinned: Some(kp) })
    }

    fn key_for(&self, index: TowpIndex) -> IdealPkeKey {
        let phi = RandomFunctionOracle::new(index.width(), 2 * self.qubits).shared();
        IdealPkeKey { index, phi }
    }
}

impl QuantumEncryptionScheme for IdealizedPke {
    type EncKey = IdealPkeKey;
    type DecKey = IdealPkeKey;

    fn id(&self) -> &str {
        "ideal-pke"
    }

    fn flavor(&self) -> Flavor {
        Flavor::Public
    }

    fn plaintext_qubits(&self) -> usize {
        self.qubits
    }

    fn keygen(&self, coins: &mut dyn CoinSource) -> Result<(IdealPkeKey, IdealPkeKey)> {
        let kp = match &self.pinned {
            Some(kp) => kp.clone(),
            None => self.family.generate(coins),
        };
        let key = self.key_for(kp.index);
        Ok((key.clone(), key))
    }

    fn public_key(&self, ek: &IdealPkeKey) -> PublicKey {
        PublicKey::Towp(ek.index.clone())
    }

    /// The random function is private to the key holder, so a key rebuilt
    /// from the index gets an independent one. Its encryptions are
    /// distributed like genuine ones as long as tags do not repeat.
    fn encryption_key_from_public(&self, pk: &PublicKey) -> Result<IdealPkeKey> {
        match pk {
            PublicKey::Towp(index) => Ok(self.key_for(index.clone())),
            PublicKey::None => Err(Error::Mode("public-key scheme handed an empty public key".into())),
        }
    }

    fn encrypt_register(
        &self,
        ek: &IdealPkeKey,
        state: &DensityMatrix,
        register: &str,
        coins: &mut dyn CoinSource,
    ) -> Result<Ciphertext> {
        self.check_register(state, register)?;
        let d = ek.index.sample(coins);
        let tag = ek.index.encode(ek.index.iterate(d, 2 * self.qubits)?)?;
        let payload = apply_pauli(&lazy_pad(&ek.phi, &tag, coins)?, state, register)?;
        Ok(Ciphertext { tag, register: register.to_string(), payload })
    }

    fn decrypt_register(&self, dk: &IdealPkeKey, c: &Ciphertext, coins: &mut dyn CoinSource) -> Result<DensityMatrix> {
        dk.index.decode(&c.tag).map_err(|e| Error::InvalidCiphertext(e.to_string()))?;
        apply_pauli(&lazy_pad(&dk.phi, &c.tag, coins)?, &c.payload, &c.register)
    }
}

/// Wraps a scheme so key generation always returns one fixed key pair. Games
/// run on it are conditioned on that key. Keys holding mutable state (the
/// lazily sampled functions above) must not be fixed this way, since their
/// memo would leak between runs.
#[derive(Clone, Debug)]
pub struct FixedKeyScheme<S: QuantumEncryptionScheme> {
    inner: S,
    ek: S::EncKey,
    dk: S::DecKey,
}

impl<S: QuantumEncryptionScheme> FixedKeyScheme<S> {
    pub fn new(inner: S, ek: S::EncKey, dk: S::DecKey) -> Self {
        FixedKeyScheme { inner, ek, dk }
    }

    pub fn generate(inner: S, coins: &mut dyn CoinSource) -> Result<Self> {
        let (ek, dk) = inner.keygen(coins)?;
        Ok(FixedKeyScheme { inner, ek, dk })
    }

    pub fn inner(&self) -> &S {
        &self.inner
    }

    pub fn keys(&self) -> (&S::EncKey, &S::DecKey) {
        (&self.ek, &self.dk)
    }
}

impl<S: QuantumEncryptionScheme> QuantumEncryptionScheme for FixedKeyScheme<S> {
    type EncKey = S::EncKey;
    type DecKey = S::DecKey;

    fn id(&self) -> &str {
        self.inner.id()
    }

    fn flavor(&self) -> Flavor {
        self.inner.flavor()
    }

    fn plaintext_qubits(&self) -> usize {
        self.inner.plaintext_qubits()
    }

    fn keygen(&self, _coins: &mut dyn CoinSource) -> Result<(S::EncKey, S::DecKey)> {
        Ok((self.ek.clone(), self.dk.clone()))
    }

    fn public_key(&self, ek: &S::EncKey) -> PublicKey {
        self.inner.public_key(ek)
    }

    fn encryption_key_from_public(&self, pk: &PublicKey) -> Result<S::EncKey> {
        self.inner.encryption_key_from_public(pk)
    }

    fn encrypt_register(
        &self,
        ek: &S::EncKey,
        state: &DensityMatrix,
        register: &str,
        coins: &mut dyn CoinSource,
    ) -> Result<Ciphertext> {
        self.inner.encrypt_register(ek, state, register, coins)
    }

    fn decrypt_register(&self, dk: &S::DecKey, c: &Ciphertext, coins: &mut dyn CoinSource) -> Result<DensityMatrix> {
        self.inner.decrypt_register(dk, c, coins)
    }
}

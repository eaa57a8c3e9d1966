use super::policy::Grant;
use crate::classical::FunctionOracle;
use crate::coins::CoinSource;
use crate::error::{Error, Result};
use crate::quantum::{apply_pauli, DensityMatrix, PauliKey};
use crate::schemes::{Ciphertext, QuantumEncryptionScheme};

/// The oracle handles one role holds during one run.
pub trait OracleAccess {
    /// Encrypts register `register` of `state`.
    fn encrypt(&mut self, state: &DensityMatrix, register: &str, coins: &mut dyn CoinSource) -> Result<Ciphertext>;

    fn decrypt(&mut self, c: &Ciphertext, coins: &mut dyn CoinSource) -> Result<DensityMatrix>;

    /// Calls made so far.
    fn calls(&self) -> usize;
}

/// Call counter shared by the oracle implementations.
#[derive(Clone, Copy, Debug)]
struct Meter {
    grant: Grant,
    budget: usize,
    calls: usize,
}

impl Meter {
    fn charge(&mut self, dec: bool) -> Result<()> {
        let allowed = if dec { self.grant.allows_dec() } else { self.grant.allows_enc() };
        if !allowed {
            let what = if dec { "decryption" } else { "encryption" };
            return Err(Error::PolicyViolation(format!("{what} oracle not granted ({:?})", self.grant)));
        }
        if self.calls >= self.budget {
            return Err(Error::BudgetExhausted(self.budget));
        }
        self.calls += 1;
        Ok(())
    }
}

/// `Enc_ek` and `Dec_dk` of a scheme, filtered through a grant and a budget.
pub struct SchemeOracles<'a, S: QuantumEncryptionScheme> {
    scheme: &'a S,
    ek: &'a S::EncKey,
    dk: &'a S::DecKey,
    meter: Meter,
}

impl<'a, S: QuantumEncryptionScheme> SchemeOracles<'a, S> {
    pub fn new(scheme: &'a S, ek: &'a S::EncKey, dk: &'a S::DecKey, grant: Grant, budget: usize) -> Self {
        SchemeOracles { scheme, ek, dk, meter: Meter { grant, budget, calls: 0 } }
    }
}

impl<S: QuantumEncryptionScheme> OracleAccess for SchemeOracles<'_, S> {
    fn encrypt(&mut self, state: &DensityMatrix, register: &str, coins: &mut dyn CoinSource) -> Result<Ciphertext> {
        self.meter.charge(false)?;
        self.scheme.encrypt_register(self.ek, state, register, coins)
    }

    fn decrypt(&mut self, c: &Ciphertext, coins: &mut dyn CoinSource) -> Result<DensityMatrix> {
        self.meter.charge(true)?;
        self.scheme.decrypt_register(self.dk, c, coins)
    }

    fn calls(&self) -> usize {
        self.meter.calls
    }
}

/// Refuses every call.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoOracles;

impl OracleAccess for NoOracles {
    fn encrypt(&mut self, _: &DensityMatrix, _: &str, _: &mut dyn CoinSource) -> Result<Ciphertext> {
        Err(Error::PolicyViolation("no oracles granted".into()))
    }

    fn decrypt(&mut self, _: &Ciphertext, _: &mut dyn CoinSource) -> Result<DensityMatrix> {
        Err(Error::PolicyViolation("no oracles granted".into()))
    }

    fn calls(&self) -> usize {
        0
    }
}

/// `Enc_phi : rho -> (r, P_phi(r) rho P_phi(r))` with fresh `r`, and
/// `Dec_phi : (r', rho) -> P_phi(r') rho P_phi(r')`, for a function oracle
/// `phi : {0,1}^{2n} -> {0,1}^{2n}`.
pub struct FunctionOracles<'a> {
    phi: &'a mut dyn FunctionOracle,
    qubits: usize,
    meter: Meter,
}

impl<'a> FunctionOracles<'a> {
    pub fn new(phi: &'a mut dyn FunctionOracle, qubits: usize, grant: Grant, budget: usize) -> Result<Self> {
        if phi.in_len() != 2 * qubits || phi.out_len() != 2 * qubits {
            return Err(Error::DimensionMismatch(format!(
                "function {} -> {} bits cannot pad {qubits} qubits",
                phi.in_len(),
                phi.out_len()
            )));
        }
        Ok(FunctionOracles { phi, qubits, meter: Meter { grant, budget, calls: 0 } })
    }

    /// Replaces the grant, keeping the call count.
    pub fn set_grant(&mut self, grant: Grant) {
        self.meter.grant = grant;
    }

    /// The challenge encryption, which does not count against the budget.
    pub fn encrypt_challenge(
        &mut self,
        state: &DensityMatrix,
        register: &str,
        coins: &mut dyn CoinSource,
    ) -> Result<Ciphertext> {
        self.pad_fresh(state, register, coins)
    }

    fn pad_fresh(&mut self, state: &DensityMatrix, register: &str, coins: &mut dyn CoinSource) -> Result<Ciphertext> {
        let qubits = state.register_qubits(register)?;
        if qubits != self.qubits {
            return Err(Error::DimensionMismatch(format!("register `{register}` has {qubits} qubits")));
        }
        let r = coins.bits(2 * self.qubits);
        let pad = PauliKey::new(self.phi.query(&r, coins)?)?;
        Ok(Ciphertext { payload: apply_pauli(&pad, state, register)?, tag: r, register: register.to_string() })
    }
}

impl OracleAccess for FunctionOracles<'_> {
    fn encrypt(&mut self, state: &DensityMatrix, register: &str, coins: &mut dyn CoinSource) -> Result<Ciphertext> {
        self.meter.charge(false)?;
        self.pad_fresh(state, register, coins)
    }

    fn decrypt(&mut self, c: &Ciphertext, coins: &mut dyn CoinSource) -> Result<DensityMatrix> {
        self.meter.charge(true)?;
        if c.tag.len() != 2 * self.qubits {
            return Err(Error::InvalidCiphertext(format!("tag of {} bits", c.tag.len())));
        }
        let pad = PauliKey::new(self.phi.query(&c.tag, coins)?)?;
        apply_pauli(&pad, &c.payload, &c.register)
    }

    fn calls(&self) -> usize {
        self.meter.calls
    }
}

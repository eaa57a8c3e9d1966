//! Classical building blocks at toy sizes: a trapdoor permutation family,
//! its hard-core bit, generators, GGM functions and random-function oracles.

pub mod arith;
mod prf;
mod prg;
mod random_function;
mod towp;

pub use prf::{
    ggm_prf, prf_distinguisher_advantage, CollisionDistinguisher, ConstantDistinguisher, ConstantZeroPrf, GgmPrf,
    KeyedFunction, Prf, PrfDistinguisher, PRF_SETUP_SEED,
};
pub use prg::{prg_iterated, ConstantPrg, DomainPrg, OrdinalPrg, Prg};
pub use random_function::{
    random_function_oracle, FunctionOracle, RandomFunctionOracle, SeededRandomFunction, SharedRandomFunction,
};
pub use towp::{
    hardcore_eval, toy_towp_new, ToyRsaFamily, TowpIndex, TowpKeyPair, Trapdoor, MAX_MODULUS_BITS, MIN_MODULUS_BITS,
};

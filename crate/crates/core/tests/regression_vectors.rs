//! Fixed vectors for the toy permutation, its generator and the GGM function,
//! computed by a separate implementation from explicit parameters.

use qenc::classical::{ggm_prf, prg_iterated, OrdinalPrg, ToyRsaFamily, TowpIndex};
use qenc::BitString;
use serde::Deserialize;

#[derive(Deserialize)]
struct Vectors {
    towp: Vec<TowpVector>,
    prg: Vec<PrgVector>,
    ggm: Vec<GgmVector>,
}

#[derive(Deserialize)]
struct TowpVector {
    p: u64,
    q: u64,
    modulus: u64,
    exponent: u64,
    inverse_exponent: u64,
    mask: u64,
    domain_size: usize,
    points: Vec<Point>,
}

#[derive(Deserialize)]
struct Point {
    x: u64,
    y: u64,
    hardcore: u8,
}

#[derive(Deserialize)]
struct PrgVector {
    modulus: u64,
    exponent: u64,
    mask: u64,
    seed: u64,
    t: usize,
    output: String,
}

#[derive(Deserialize)]
struct GgmVector {
    modulus: u64,
    exponent: u64,
    mask: u64,
    key: String,
    input: String,
    output: String,
}

fn vectors() -> Vectors {
    serde_json::from_str(include_str!("data/toy_vectors.json")).unwrap()
}

#[test]
fn towp_vectors() {
    for v in vectors().towp {
        let bits = 64 - v.modulus.leading_zeros() as usize;
        let kp = ToyRsaFamily::new(bits).unwrap().keypair_from_primes(v.p, v.q, v.mask).unwrap();
        assert_eq!(kp.index.modulus(), v.modulus);
        assert_eq!(kp.index.exponent(), v.exponent);
        assert_eq!(kp.index.domain().len(), v.domain_size);
        assert_eq!(kp.trapdoor.inverse_exponent(), v.inverse_exponent);
        for pt in v.points {
            assert_eq!(kp.index.evaluate(pt.x).unwrap(), pt.y);
            assert_eq!(kp.trapdoor.invert(pt.y).unwrap(), pt.x);
            assert_eq!(kp.index.hardcore(pt.x).unwrap() as u8, pt.hardcore);
        }
    }
}

#[test]
fn prg_vectors() {
    for v in vectors().prg {
        let idx = TowpIndex::from_parts(v.modulus, v.exponent, v.mask).unwrap();
        assert_eq!(prg_iterated(&idx, v.seed, v.t).unwrap().to_string(), v.output);
    }
}

#[test]
fn ggm_vectors() {
    for v in vectors().ggm {
        let idx = TowpIndex::from_parts(v.modulus, v.exponent, v.mask).unwrap();
        let prg = OrdinalPrg::new(idx, v.key.len(), 2 * v.key.len()).unwrap();
        let key: BitString = v.key.parse().unwrap();
        let x: BitString = v.input.parse().unwrap();
        assert_eq!(ggm_prf(&prg, &key, &x, v.output.len()).unwrap().to_string(), v.output);
    }
}

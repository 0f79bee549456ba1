//! Small cq models built in code, plus the JSON fixtures under `models/`.

use std::path::PathBuf;

use cqrate::qcore::model::Model;
use cqrate::qcore::{tensor, CqState, DensityMatrix, TupleIndexer};
use cqrate::regions::NamedCq;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../models").join(name)
}

pub fn load(name: &str) -> Model {
    Model::load(fixture(name)).unwrap()
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

/// Uniform law over `alphabets` with output `state(tuple)`.
pub fn uniform_cq(alphabets: &[usize], qdims: &[usize], state: impl Fn(&[usize]) -> DensityMatrix) -> CqState {
    let ix = TupleIndexer::new(alphabets);
    let n = ix.len();
    let states: Vec<DensityMatrix> = ix.iter().map(|t| state(&t)).collect();
    CqState::new(alphabets.to_vec(), vec![1.0 / n as f64; n], states, qdims.to_vec()).unwrap()
}

/// Marton split broadcast: `U0` trivial, `U1` and `U2` uniform on `b1` and
/// `b2` bits, receiver `i` sees `U_i` in the computational basis.
pub fn marton_split(b1: u32, b2: u32) -> NamedCq {
    let (d1, d2) = (1usize << b1, 1usize << b2);
    let cq = uniform_cq(&[1, d1, d2], &[d1, d2], |t| {
        tensor(&DensityMatrix::basis(d1, t[1]).unwrap(), &DensityMatrix::basis(d2, t[2]).unwrap())
    });
    NamedCq::new(cq, names(&["U0", "U1", "U2"]), names(&["Y1", "Y2"])).unwrap()
}

/// Every receiver sees the maximally mixed state regardless of the input.
pub fn useless(classical: &[&str], alphabets: &[usize], outputs: &[&str]) -> NamedCq {
    let qdims = vec![2; outputs.len()];
    let d = 1 << outputs.len();
    let cq = uniform_cq(alphabets, &qdims, |_| DensityMatrix::maximally_mixed(d));
    NamedCq::new(cq, names(classical), names(outputs)).unwrap()
}

pub fn marton_useless() -> NamedCq {
    useless(&["U0", "U1", "U2"], &[2, 2, 2], &["Y1", "Y2"])
}

pub fn cmge_useless() -> NamedCq {
    useless(&["Q", "U1", "X1", "U2", "X2"], &[1, 2, 2, 2, 2], &["Y1", "Y2"])
}

pub fn hk_ea_useless() -> NamedCq {
    useless(&["Q", "U1", "U2"], &[1, 2, 2], &["Y1", "Z1", "Y2", "Z2"])
}

/// CMGE instance with `X_i = (U_i, V_i)` for public bits `U_i` and private
/// bits `V_i` (`X_i` indexes both), every receiver seeing both inputs
/// noiselessly. Public alphabets have `2^pub` symbols, private `2^priv`.
pub fn cmge_noiseless(public: u32, private: u32) -> (CqState, Vec<String>, Vec<String>) {
    let nu = 1usize << public;
    let nx = nu << private;
    let ix = TupleIndexer::new(&[1, nu, nx, nu, nx]);
    let mut probs = Vec::with_capacity(ix.len());
    let mut states = Vec::with_capacity(ix.len());
    let w = 1.0 / (nx * nx) as f64;
    for t in ix.iter() {
        let ok = t[2] >> private == t[1] && t[4] >> private == t[3];
        probs.push(if ok { w } else { 0.0 });
        let y = tensor(&DensityMatrix::basis(nx, t[2]).unwrap(), &DensityMatrix::basis(nx, t[4]).unwrap());
        states.push(tensor(&y, &y));
    }
    let cq = CqState::new(vec![1, nu, nx, nu, nx], probs, states, vec![nx * nx, nx * nx]).unwrap();
    (cq, names(&["Q", "U1", "X1", "U2", "X2"]), names(&["Y1", "Y2"]))
}

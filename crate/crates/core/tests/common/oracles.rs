use cqrate::qcore::linalg::{self, CMatrix};
use cqrate::qcore::{CqState, DensityMatrix, TupleIndexer};

/// Minimal type-II mass over tests `f ∈ {0,1}^n` with at most one fractional
/// coordinate, which is where the optimum of the linear program sits.
pub fn dh_vertex_enumeration(p: &[f64], q: &[f64], eps: f64) -> f64 {
    let n = p.len();
    let target = 1.0 - eps;
    let mut best = f64::INFINITY;
    for mask in 0u32..(1 << n) {
        let ones = |i: usize| mask & (1 << i) != 0;
        let pa: f64 = (0..n).filter(|&i| ones(i)).map(|i| p[i]).sum();
        let qa: f64 = (0..n).filter(|&i| ones(i)).map(|i| q[i]).sum();
        if pa >= target - 1e-15 {
            best = best.min(qa);
        }
        for j in (0..n).filter(|&j| !ones(j) && p[j] > 0.0) {
            let need = target - pa;
            if need > 0.0 && need <= p[j] {
                best = best.min(qa + need / p[j] * q[j]);
            }
        }
    }
    if best == 0.0 {
        f64::INFINITY
    } else {
        -best.log2()
    }
}

/// Smallest t over a fine grid refined by exact segment solves.
pub fn dmax_segment_oracle(p: &[f64], q: &[f64], eps: f64) -> f64 {
    let removal = |t: f64| -> f64 {
        p.iter()
            .zip(q)
            .map(|(a, b)| if *b == 0.0 { *a } else { (a - t * b).max(0.0) })
            .sum()
    };
    if removal(f64::MAX) > eps + 1e-15 {
        return f64::INFINITY;
    }
    // Breakpoints of the piecewise-linear removal function.
    let mut knots: Vec<f64> = p
        .iter()
        .zip(q)
        .filter(|(_, b)| **b > 0.0)
        .map(|(a, b)| a / b)
        .collect();
    knots.push(0.0);
    knots.sort_by(f64::total_cmp);
    knots.dedup();
    let mut best = f64::INFINITY;
    for w in knots.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        let (flo, fhi) = (removal(lo), removal(hi));
        if fhi <= eps + 1e-15 && flo >= eps {
            let t = if flo == fhi { lo } else { lo + (flo - eps) / (flo - fhi) * (hi - lo) };
            best = best.min(t);
        } else if flo <= eps + 1e-15 {
            best = best.min(lo);
        }
    }
    if best == 0.0 {
        f64::NEG_INFINITY
    } else {
        best.log2()
    }
}

/// Element-wise partial trace for two factors.
pub fn partial_trace_2(m: &CMatrix, da: usize, db: usize, keep_first: bool) -> CMatrix {
    if keep_first {
        CMatrix::from_fn(da, da, |i, j| (0..db).map(|k| m[(i * db + k, j * db + k)]).sum())
    } else {
        CMatrix::from_fn(db, db, |i, j| (0..da).map(|k| m[(k * db + i, k * db + j)]).sum())
    }
}

/// Explicit weighted sum `ρ_{x_S} = Σ p(x) ρ_x / p(x_S)` for one symbol.
pub fn marginal_state(cq: &CqState, set: &[usize], value: &[usize]) -> (f64, CMatrix) {
    let d = cq.qdim();
    let mut acc = CMatrix::zeros(d, d);
    let mut mass = 0.0;
    for (i, t) in cq.indexer().iter().enumerate() {
        if set.iter().zip(value).all(|(&k, &v)| t[k] == v) {
            acc += cq.states()[i].matrix() * linalg::c(cq.probs()[i]);
            mass += cq.probs()[i];
        }
    }
    if mass > 0.0 {
        acc /= linalg::c(mass);
    }
    (mass, acc)
}

/// Brute-force triple loop for `ρ_{(S1,S2,S3)}` with quantum part on the
/// right. Returns (probabilities, states) over the full alphabet.
pub fn split_brute_force(cq: &CqState, s1: &[usize], s2: &[usize], s3: &[usize]) -> (Vec<f64>, Vec<CMatrix>) {
    let ix = cq.indexer();
    let pick = |t: &[usize], s: &[usize]| -> Vec<usize> { s.iter().map(|&k| t[k]).collect() };
    let s13: Vec<usize> = s1.iter().chain(s3).copied().collect();
    let s12: Vec<usize> = s1.iter().chain(s2).copied().collect();
    let mut probs = Vec::new();
    let mut states = Vec::new();
    for t in ix.iter() {
        let (p1, _) = marginal_state(cq, s1, &pick(&t, s1));
        let (p12, _) = marginal_state(cq, &s12, &pick(&t, &s12));
        let (p13, st) = marginal_state(cq, &s13, &pick(&t, &s13));
        probs.push(if p1 > 0.0 { p12 * p13 / p1 } else { 0.0 });
        states.push(st);
    }
    (probs, states)
}

pub fn dense(cq_probs: &[f64], states: &[CMatrix]) -> CMatrix {
    let d = states[0].nrows();
    let n = states.len();
    let mut out = CMatrix::zeros(n * d, n * d);
    for x in 0..n {
        let b = &states[x] * linalg::c(cq_probs[x]);
        out.view_mut((x * d, x * d), (d, d)).copy_from(&b);
    }
    out
}

/// Dense assembly of both operators followed by the unblocked solver.
pub fn dense_dh(alpha: &CqState, beta: &CqState, eps: f64) -> f64 {
    let a = DensityMatrix::new(alpha.block_operator()).unwrap();
    let b = DensityMatrix::new(beta.block_operator()).unwrap();
    cqrate::osentropy::dh_quantum(&a, &b, eps).unwrap().value
}

pub fn tuples(sizes: &[usize]) -> Vec<Vec<usize>> {
    TupleIndexer::new(sizes).iter().collect()
}

/// Digits of `i` in the mixed radix `dims` (first factor most significant).
fn digits(mut i: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = i % dims[k];
        i /= dims[k];
    }
    out
}

fn number(d: &[usize], dims: &[usize]) -> usize {
    d.iter().zip(dims).fold(0, |acc, (&x, &n)| acc * n + x)
}

/// Partial trace by summing matrix elements, keeping ascending `keep`.
pub fn partial_trace_sum(m: &CMatrix, dims: &[usize], keep: &[usize]) -> CMatrix {
    let kd: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let n: usize = kd.iter().product();
    let mut out = CMatrix::zeros(n, n);
    let d = m.nrows();
    for i in 0..d {
        let di = digits(i, dims);
        for j in 0..d {
            let dj = digits(j, dims);
            if (0..dims.len()).any(|k| !keep.contains(&k) && di[k] != dj[k]) {
                continue;
            }
            let a: Vec<usize> = keep.iter().map(|&k| di[k]).collect();
            let b: Vec<usize> = keep.iter().map(|&k| dj[k]).collect();
            out[(number(&a, &kd), number(&b, &kd))] += m[(i, j)];
        }
    }
    out
}

/// `I_H(left : right | cond)` by explicit enumeration of both operators
/// from the full cq-state, assembled densely and fed to the unblocked solver.
pub fn split_dense_dh(cq: &CqState, split: &cqrate::qcore::Split, eps: f64) -> f64 {
    let mut ks: Vec<usize> = split.cond.iter().chain(&split.left).chain(&split.right).copied().collect();
    ks.sort_unstable();
    let mut qs: Vec<usize> = split.left_quantum.iter().chain(&split.right_quantum).copied().collect();
    qs.sort_unstable();
    let qdims = cq.qdims().to_vec();
    let qsd: Vec<usize> = qs.iter().map(|&k| qdims[k]).collect();
    let lq: Vec<usize> = split.left_quantum.iter().map(|k| qs.iter().position(|q| q == k).unwrap()).collect();
    let rq: Vec<usize> = split.right_quantum.iter().map(|k| qs.iter().position(|q| q == k).unwrap()).collect();
    let mut lq_sorted = lq.clone();
    lq_sorted.sort_unstable();
    let mut rq_sorted = rq.clone();
    rq_sorted.sort_unstable();
    let ld: Vec<usize> = lq_sorted.iter().map(|&k| qsd[k]).collect();
    let rd: Vec<usize> = rq_sorted.iter().map(|&k| qsd[k]).collect();
    let sizes: Vec<usize> = ks.iter().map(|&k| cq.alphabets()[k]).collect();
    let pick = |t: &[usize], set: &[usize]| -> Vec<usize> {
        set.iter().map(|k| t[ks.iter().position(|x| x == k).unwrap()]).collect()
    };
    let reduce = |set: &[usize], value: &[usize], keep: &[usize]| -> (f64, CMatrix) {
        let (p, m) = marginal_state(cq, set, value);
        let q_in_full: Vec<usize> = keep.iter().map(|&k| qs[k]).collect();
        (p, partial_trace_sum(&m, &qdims, &q_in_full))
    };
    let cl: Vec<usize> = split.cond.iter().chain(&split.left).copied().collect();
    let cr: Vec<usize> = split.cond.iter().chain(&split.right).copied().collect();
    let all_q: Vec<usize> = (0..qs.len()).collect();
    let (mut pa, mut sa, mut pb, mut sb) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for t in tuples(&sizes) {
        let (p, rho) = reduce(&ks, &t, &all_q);
        pa.push(p);
        sa.push(rho);
        let (pc, _) = marginal_state(cq, &split.cond, &pick(&t, &split.cond));
        let (pl, rl) = reduce(&cl, &pick(&t, &cl), &lq_sorted);
        let (pr, rr) = reduce(&cr, &pick(&t, &cr), &rq_sorted);
        pb.push(if pc > 0.0 { pl * pr / pc } else { 0.0 });
        let n: usize = qsd.iter().product();
        let beta = CMatrix::from_fn(n, n, |i, j| {
            let (di, dj) = (digits(i, &qsd), digits(j, &qsd));
            let sub = |d: &[usize], set: &[usize], dims: &[usize]| number(&set.iter().map(|&k| d[k]).collect::<Vec<_>>(), dims);
            rl[(sub(&di, &lq_sorted, &ld), sub(&dj, &lq_sorted, &ld))] * rr[(sub(&di, &rq_sorted, &rd), sub(&dj, &rq_sorted, &rd))]
        });
        sb.push(beta);
    }
    let a = DensityMatrix::new(dense(&pa, &sa)).unwrap();
    let b = DensityMatrix::new(dense(&pb, &sb)).unwrap();
    cqrate::osentropy::dh_quantum(&a, &b, eps).unwrap().value
}

/// Classical Neyman–Pearson threshold test: accept symbols in decreasing
/// likelihood ratio `p/q` (q-null symbols first), randomizing on the last.
pub fn dh_threshold_oracle(p: &[f64], q: &[f64], eps: f64) -> f64 {
    let mut order: Vec<usize> = (0..p.len()).filter(|&i| p[i] > 0.0).collect();
    let ratio = |i: usize| if q[i] == 0.0 { f64::INFINITY } else { p[i] / q[i] };
    order.sort_by(|&a, &b| ratio(b).partial_cmp(&ratio(a)).unwrap());
    let mut need = 1.0 - eps;
    let mut beta = 0.0;
    for i in order {
        if need <= 1e-15 {
            break;
        }
        let take = (need / p[i]).min(1.0);
        beta += take * q[i];
        need -= take * p[i];
    }
    if beta == 0.0 {
        f64::INFINITY
    } else {
        -beta.log2()
    }
}

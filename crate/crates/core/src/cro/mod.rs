//! Membership tests for the classically replaceable operation (CRO) classes.
//!
//! Every test compares two superoperators built from the channel and a
//! dephasing map; the residual is the Frobenius norm of the difference of
//! the corresponding trace-one Choi states (`‖S₁ − S₂‖_F / d`).

use crate::channels::{self, check_unitary, dephasing_superop, te_superop, Channel, ProjectorSet, StochasticMatrix};
use crate::error::{Error, Result};
use crate::matrix::{min_eigenvalue, partial_transpose, ComplexMatrix, DensityMatrix};
use crate::scalar::{c, cr, Real};

pub use crate::channels::{random_qccro, random_qqcro};

/// Outcome of a membership test.
#[derive(Debug, Clone)]
pub struct CroVerdict<T: Real = f64> {
    pub is_member: bool,
    pub residual: T,
    /// Classical stochastic matrix realising the channel, for members.
    pub replacement: Option<StochasticMatrix<T>>,
    /// Probe state on which the defining identity fails, for non-members.
    pub witness_state: Option<DensityMatrix<T>>,
}

/// Which defining identity to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CroKind {
    /// `O∘Δ = Δ∘O∘Δ`
    Cq,
    /// `O = Δ∘O∘Δ`
    Qq,
    /// `Δ∘O = Δ∘O∘Δ`
    Qc,
    /// `Δ∘O = O∘Δ`
    Dio,
}

impl CroKind {
    pub const ALL: [CroKind; 4] = [CroKind::Cq, CroKind::Qq, CroKind::Qc, CroKind::Dio];

    pub fn name(self) -> &'static str {
        match self {
            CroKind::Cq => "cqcro",
            CroKind::Qq => "qqcro",
            CroKind::Qc => "qccro",
            CroKind::Dio => "dio",
        }
    }
}

/// Probe states `|k⟩`, `(|k⟩+|l⟩)/√2`, `(|k⟩+i|l⟩)/√2`; they span operator space.
pub fn probe_states<T: Real>(d: usize) -> Vec<DensityMatrix<T>> {
    let mut out: Vec<_> = (0..d).map(|k| DensityMatrix::basis(d, k)).collect();
    for k in 0..d {
        for l in k + 1..d {
            for phase in [cr(T::one()), c(T::zero(), T::one())] {
                let mut v = vec![cr(T::zero()); d];
                v[k] = cr(T::one());
                v[l] = phase;
                out.push(DensityMatrix::pure(&v).expect("nonzero probe"));
            }
        }
    }
    out
}

fn defect_on<T: Real>(diff: &ComplexMatrix<T>, sigma: &DensityMatrix<T>) -> T {
    diff.mat_vec(sigma.matrix().as_slice())
        .iter()
        .map(|z| z.norm_sqr())
        .sum::<T>()
        .sqrt()
}

/// Probe state maximising `‖(L − R)(σ)‖_F`, if that defect exceeds `tol`.
fn witness<T: Real>(lhs: &ComplexMatrix<T>, rhs: &ComplexMatrix<T>, d: usize, tol: T) -> Option<DensityMatrix<T>> {
    let diff = lhs - rhs;
    probe_states::<T>(d)
        .into_iter()
        .map(|s| (defect_on(&diff, &s), s))
        .filter(|(v, _)| *v > tol)
        .max_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal))
        .map(|(_, s)| s)
}

/// `T_nm = tr(E_n O(F_m / tr F_m))` read off the superoperator.
fn replacement_matrix<T: Real>(
    o: &ComplexMatrix<T>,
    e_out: &ProjectorSet<T>,
    f_in: &ProjectorSet<T>,
) -> StochasticMatrix<T> {
    let d = e_out.dim();
    let outputs: Vec<ComplexMatrix<T>> = f_in
        .projectors()
        .iter()
        .zip(f_in.ranks())
        .map(|(f, &r)| {
            let v = o.mat_vec(f.scale(T::one() / T::lit(r as f64)).as_slice());
            ComplexMatrix::unvec(d, d, &v)
        })
        .collect();
    StochasticMatrix::from_fn_unchecked(e_out.len(), f_in.len(), |n, m| {
        outputs[m].real_pairing(&e_out.projectors()[n])
    })
}

fn superop_residual<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>, d: usize) -> T {
    a.dist(b) / T::lit(d as f64)
}

fn verdict<T: Real>(
    lhs: &ComplexMatrix<T>,
    rhs: &ComplexMatrix<T>,
    d: usize,
    tol: T,
    replacement: impl FnOnce() -> Option<StochasticMatrix<T>>,
) -> CroVerdict<T> {
    let residual = superop_residual(lhs, rhs, d);
    let is_member = residual <= tol;
    CroVerdict {
        is_member,
        residual,
        replacement: if is_member { replacement() } else { None },
        witness_state: if is_member { None } else { witness(lhs, rhs, d, tol) },
    }
}

/// Tests `o` against the identity for `kind` built from the dephasing
/// superoperator `t` (computational `Δ` or a PVM-induced `T_E`).
fn classify_with<T: Real>(
    o: &ComplexMatrix<T>,
    t: &ComplexMatrix<T>,
    d: usize,
    kind: CroKind,
    tol: T,
    replacement: impl FnOnce() -> Option<StochasticMatrix<T>>,
) -> CroVerdict<T> {
    let ot = o.matmul(t);
    let to = t.matmul(o);
    match kind {
        CroKind::Cq => verdict(&ot, &t.matmul(&ot), d, tol, replacement),
        CroKind::Qq => verdict(o, &t.matmul(&ot), d, tol, replacement),
        CroKind::Qc => verdict(&to, &to.matmul(t), d, tol, replacement),
        CroKind::Dio => verdict(&to, &ot, d, tol, replacement),
    }
}

/// Membership of `o` in the class `kind` with respect to the computational basis.
pub fn classify<T: Real>(o: &Channel<T>, kind: CroKind, tol: T) -> CroVerdict<T> {
    let d = o.dim();
    let delta = dephasing_superop::<T>(d);
    let basis = ProjectorSet::computational(d);
    classify_with(o.superop(), &delta, d, kind, tol, || {
        Some(replacement_matrix(o.superop(), &basis, &basis))
    })
}

/// `O∘Δ = Δ∘O∘Δ`.
pub fn is_cqcro<T: Real>(o: &Channel<T>) -> CroVerdict<T> {
    classify(o, CroKind::Cq, T::default_tol())
}

/// `O = Δ∘O∘Δ`.
pub fn is_qqcro<T: Real>(o: &Channel<T>) -> CroVerdict<T> {
    classify(o, CroKind::Qq, T::default_tol())
}

/// `Δ∘O = Δ∘O∘Δ`.
pub fn is_qccro<T: Real>(o: &Channel<T>) -> CroVerdict<T> {
    classify(o, CroKind::Qc, T::default_tol())
}

/// `Δ∘O = O∘Δ`. Members are also qcCROs, so the replacement matrix is reported.
pub fn is_dio<T: Real>(o: &Channel<T>) -> CroVerdict<T> {
    classify(o, CroKind::Dio, T::default_tol())
}

fn same_dim<T: Real>(o: &Channel<T>, p: &ProjectorSet<T>) -> Result<()> {
    if o.dim() != p.dim() {
        return Err(Error::DimensionMismatch(format!(
            "channel of dimension {} with projectors of dimension {}",
            o.dim(),
            p.dim()
        )));
    }
    Ok(())
}

/// The identities of [`classify`] with `Δ` replaced by `T_E`.
pub fn is_cro_pvm<T: Real>(o: &Channel<T>, e: &ProjectorSet<T>, kind: CroKind) -> Result<CroVerdict<T>> {
    is_cro_pvm_tol(o, e, kind, T::default_tol())
}

pub fn is_cro_pvm_tol<T: Real>(o: &Channel<T>, e: &ProjectorSet<T>, kind: CroKind, tol: T) -> Result<CroVerdict<T>> {
    same_dim(o, e)?;
    let t = te_superop(e);
    Ok(classify_with(o.superop(), &t, o.dim(), kind, tol, || {
        Some(replacement_matrix(o.superop(), e, e))
    }))
}

/// `T_E∘O = T_E∘O∘T_F`.
pub fn is_qccro_two_pvm<T: Real>(
    o: &Channel<T>,
    e_out: &ProjectorSet<T>,
    f_in: &ProjectorSet<T>,
) -> Result<CroVerdict<T>> {
    same_dim(o, e_out)?;
    same_dim(o, f_in)?;
    let te = te_superop(e_out);
    let tf = te_superop(f_in);
    let lhs = te.matmul(o.superop());
    let rhs = lhs.matmul(&tf);
    Ok(verdict(&lhs, &rhs, o.dim(), T::default_tol(), || {
        Some(replacement_matrix(o.superop(), e_out, f_in))
    }))
}

/// First `U` in `us` for which `O∘U⁻¹` is a qcCRO. When none qualifies the
/// verdict with the smallest residual is returned.
pub fn is_qccro_under_unitaries<T: Real>(
    o: &Channel<T>,
    us: &[ComplexMatrix<T>],
) -> Result<(CroVerdict<T>, Option<usize>)> {
    let d = o.dim();
    let mut best: Option<CroVerdict<T>> = None;
    for (k, u) in us.iter().enumerate() {
        check_unitary(u, T::default_tol())?;
        if u.rows() != d {
            return Err(Error::DimensionMismatch(format!(
                "unitary {k} is {}x{} for a channel of dimension {d}",
                u.rows(),
                u.cols()
            )));
        }
        let undo = Channel::unitary(&u.adjoint())?;
        let v = is_qccro(&o.compose(&undo)?);
        if v.is_member {
            return Ok((v, Some(k)));
        }
        if best.as_ref().is_none_or(|b| v.residual < b.residual) {
            best = Some(v);
        }
    }
    let fallback = || {
        let mut v = is_qccro(o);
        v.is_member = false;
        v.replacement = None;
        v
    };
    Ok((best.unwrap_or_else(fallback), None))
}

/// Permutation-with-phases description of a deterministic classically
/// replaceable unitary: `U|i⟩ = e^{iφ_i} |perm[i]⟩`.
#[derive(Debug, Clone)]
pub struct DeterministicMap<T: Real = f64> {
    pub permutation: Vec<usize>,
    pub phases: Vec<T>,
    pub t: StochasticMatrix<T>,
}

/// A unitary is a qcCRO iff every row has a single nonzero entry; its
/// replacement is then a 0/1 permutation matrix.
pub fn is_deterministic_cru<T: Real>(u: &ComplexMatrix<T>) -> Result<Option<DeterministicMap<T>>> {
    is_deterministic_cru_tol(u, T::default_tol())
}

pub fn is_deterministic_cru_tol<T: Real>(u: &ComplexMatrix<T>, tol: T) -> Result<Option<DeterministicMap<T>>> {
    check_unitary(u, tol.max(T::default_tol()))?;
    let d = u.rows();
    let mut permutation = vec![usize::MAX; d];
    let mut phases = vec![T::zero(); d];
    for j in 0..d {
        let hits: Vec<usize> = (0..d).filter(|&i| u[(j, i)].norm() > tol).collect();
        if hits.len() != 1 {
            return Ok(None);
        }
        let i = hits[0];
        permutation[i] = j;
        phases[i] = u[(j, i)].arg();
    }
    let t = StochasticMatrix::from_fn_unchecked(d, d, |j, i| if permutation[i] == j { T::one() } else { T::zero() });
    Ok(Some(DeterministicMap { permutation, phases, t }))
}

/// Membership in `R = {O | ∃j ∀i∈I: T_i∘O = T_i∘O∘T_j}` for `n ≤ 3` qubits.
/// Returns the smallest qualifying Pauli index `j`.
pub fn vqa_replaceable_set_r<T: Real>(
    o: &Channel<T>,
    pauli_indices: &[usize],
    n_qubits: usize,
) -> Result<(bool, Option<usize>)> {
    vqa_replaceable_set_r_threads(o, pauli_indices, n_qubits, 1)
}

/// Same as [`vqa_replaceable_set_r`], splitting the candidate `j` values
/// over `threads` workers. The reported `j` does not depend on `threads`.
pub fn vqa_replaceable_set_r_threads<T: Real>(
    o: &Channel<T>,
    pauli_indices: &[usize],
    n_qubits: usize,
    threads: usize,
) -> Result<(bool, Option<usize>)> {
    vqa_replaceable_set_r_with(o, pauli_indices, n_qubits, threads, T::default_tol())
}

/// Same as [`vqa_replaceable_set_r_threads`] with an explicit residual threshold.
pub fn vqa_replaceable_set_r_with<T: Real>(
    o: &Channel<T>,
    pauli_indices: &[usize],
    n_qubits: usize,
    threads: usize,
    tol: T,
) -> Result<(bool, Option<usize>)> {
    if n_qubits == 0 || n_qubits > 3 {
        return Err(Error::Unsupported(format!(
            "replaceability enumeration supports 1 to 3 qubits, got {n_qubits}"
        )));
    }
    let d = 1usize << n_qubits;
    if o.dim() != d {
        return Err(Error::DimensionMismatch(format!(
            "channel of dimension {} for {n_qubits} qubits",
            o.dim()
        )));
    }
    let count = 4usize.pow(n_qubits as u32);
    let pauli_t = |j: usize| -> Result<ComplexMatrix<T>> {
        let p = channels::pauli_matrix::<T>(j, n_qubits)?;
        Ok(te_superop(&ProjectorSet::from_pauli(&p)?))
    };
    let lhs: Vec<ComplexMatrix<T>> = pauli_indices
        .iter()
        .map(|&i| Ok(pauli_t(i)?.matmul(o.superop())))
        .collect::<Result<_>>()?;
    let accepts = |j: usize| -> Result<bool> {
        let tj = pauli_t(j)?;
        Ok(lhs.iter().all(|a| superop_residual(a, &a.matmul(&tj), d) <= tol))
    };
    let threads = threads.max(1).min(count);
    if threads == 1 {
        for j in 0..count {
            if accepts(j)? {
                return Ok((true, Some(j)));
            }
        }
        return Ok((false, None));
    }
    let found = std::thread::scope(|scope| {
        let workers: Vec<_> = (0..threads)
            .map(|w| {
                let accepts = &accepts;
                scope.spawn(move || -> Result<Option<usize>> {
                    for j in (w..count).step_by(threads) {
                        if accepts(j)? {
                            return Ok(Some(j));
                        }
                    }
                    Ok(None)
                })
            })
            .collect();
        workers
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect::<Result<Vec<_>>>()
    })?;
    let j = found.into_iter().flatten().min();
    Ok((j.is_some(), j))
}

/// Outcome of the partial-transpose test on a Choi state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EbVerdict {
    /// PPT Choi state in a dimension where PPT implies separability.
    EbConfirmed,
    /// NPT Choi state: entangled, so the channel is not entanglement breaking.
    NotEbConfirmed,
    /// PPT but `d² > 6`; separability undecided.
    Inconclusive,
}

pub fn eb_ppt_test<T: Real>(o: &Channel<T>) -> EbVerdict {
    let d = o.dim();
    let pt = partial_transpose(o.choi(), [d, d], 1).expect("Choi is bipartite");
    if min_eigenvalue(&pt) < -T::default_tol() {
        EbVerdict::NotEbConfirmed
    } else if d * d <= 6 {
        EbVerdict::EbConfirmed
    } else {
        EbVerdict::Inconclusive
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{compose, dephasing, named_gate, random_channel, tensor};

    type Ch = Channel<f64>;

    fn gate(name: &str) -> Ch {
        let n = match name {
            "CNOT" => 2,
            "CCX" => 3,
            _ => 1,
        };
        named_gate(name, &[], n).unwrap()
    }

    #[test]
    fn dephased_hadamard_relations() {
        let dh = compose(&dephasing(2), &gate("H")).unwrap();
        assert!(is_cqcro(&dh).is_member);
        assert!(!is_dio(&dh).is_member);
    }

    #[test]
    fn hadamard_is_in_no_class() {
        let h = gate("H");
        for kind in CroKind::ALL {
            let v = classify(&h, kind, 1e-9);
            assert!(!v.is_member, "{kind:?}");
            assert!(v.witness_state.is_some());
            assert!(v.replacement.is_none());
        }
    }

    #[test]
    fn identity_and_dephasing() {
        let id = Ch::identity(2);
        assert!(is_cqcro(&id).is_member);
        let delta: Ch = dephasing(2);
        let v = is_qqcro(&delta);
        assert!(v.is_member);
        let t = v.replacement.unwrap();
        assert!(t.max_abs_diff(&StochasticMatrix::identity(2)) < 1e-12);
    }

    #[test]
    fn cnot_is_dio_not_qq() {
        let cnot = gate("CNOT");
        assert!(is_dio(&cnot).is_member);
        assert!(!is_qqcro(&cnot).is_member);
    }

    #[test]
    fn depolarizing_is_qq_with_uniform_matrix() {
        let v = is_qqcro(&Ch::completely_depolarizing(3));
        assert!(v.is_member);
        let t = v.replacement.unwrap();
        for j in 0..3 {
            for i in 0..3 {
                assert!((t.get(j, i) - 1.0 / 3.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn qc_examples() {
        let z = is_qccro(&gate("Z"));
        assert!(z.is_member);
        assert!(z.replacement.unwrap().max_abs_diff(&StochasticMatrix::identity(2)) < 1e-12);
        let x = is_qccro(&gate("X")).replacement.unwrap();
        assert!((x.get(0, 1) - 1.0).abs() < 1e-12 && x.get(0, 0).abs() < 1e-12);
        assert!(!is_qccro(&gate("H")).is_member);
        let plus = DensityMatrix::pure(&[cr(1.0), cr(1.0)]).unwrap();
        let prep = Ch::preparation(&plus);
        assert!(is_qccro(&prep).is_member);
        assert!(!is_dio(&prep).is_member);
    }

    #[test]
    fn pvm_reduces_to_basis_tests() {
        let comp = ProjectorSet::computational(2);
        for o in [gate("H"), gate("Z"), compose(&dephasing(2), &gate("H")).unwrap()] {
            for kind in [CroKind::Cq, CroKind::Qq, CroKind::Qc] {
                let a = is_cro_pvm(&o, &comp, kind).unwrap();
                let b = classify(&o, kind, 1e-9);
                assert_eq!(a.is_member, b.is_member);
                assert!((a.residual - b.residual).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn te_is_member_of_its_own_classes() {
        let zz = channels::pauli_matrix::<f64>(15, 2).unwrap();
        let pvm = ProjectorSet::from_pauli(&zz).unwrap();
        let te = channels::te_channel(&pvm).unwrap();
        for kind in [CroKind::Cq, CroKind::Qq, CroKind::Qc] {
            assert!(is_cro_pvm(&te, &pvm, kind).unwrap().is_member, "{kind:?}");
        }
    }

    #[test]
    fn two_pvm_hadamard() {
        let h = gate("H");
        let z_basis = ProjectorSet::computational(2);
        let x_basis = ProjectorSet::from_basis(&channels::gate_unitary("H", &[]).unwrap()).unwrap();
        assert!(is_qccro_two_pvm(&h, &z_basis, &x_basis).unwrap().is_member);
        assert!(!is_qccro_two_pvm(&h, &z_basis, &z_basis).unwrap().is_member);
    }

    #[test]
    fn unitary_ensembles() {
        let h = gate("H");
        let hu = channels::gate_unitary::<f64>("H", &[]).unwrap();
        let id = ComplexMatrix::identity(2);
        let (v, k) = is_qccro_under_unitaries(&h, std::slice::from_ref(&hu)).unwrap();
        assert!(v.is_member && k == Some(0));
        let (v, k) = is_qccro_under_unitaries(&h, std::slice::from_ref(&id)).unwrap();
        assert!(!v.is_member && k.is_none());
        let (v, k) = is_qccro_under_unitaries(&gate("Z"), &[id, hu]).unwrap();
        assert!(v.is_member && k == Some(0));
        let bad = ComplexMatrix::diag(&[1.0, 2.0]);
        assert!(matches!(
            is_qccro_under_unitaries(&h, &[bad]),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn deterministic_unitaries() {
        let x = channels::gate_unitary::<f64>("X", &[]).unwrap();
        let m = is_deterministic_cru(&x).unwrap().unwrap();
        assert_eq!(m.permutation, vec![1, 0]);
        let mut phase = ComplexMatrix::identity(2);
        phase[(1, 1)] = c(0.3f64.cos(), 0.3f64.sin());
        let m = is_deterministic_cru(&phase).unwrap().unwrap();
        assert!(m.t.max_abs_diff(&StochasticMatrix::identity(2)) == 0.0);
        assert!((m.phases[1] - 0.3).abs() < 1e-12);
        let h = channels::gate_unitary::<f64>("H", &[]).unwrap();
        assert!(is_deterministic_cru(&h).unwrap().is_none());
    }

    #[test]
    fn eb_examples() {
        assert_eq!(eb_ppt_test(&dephasing::<f64>(2)), EbVerdict::EbConfirmed);
        assert_eq!(eb_ppt_test(&Ch::identity(2)), EbVerdict::NotEbConfirmed);
        assert_eq!(eb_ppt_test(&dephasing::<f64>(3)), EbVerdict::Inconclusive);
    }

    #[test]
    fn random_qccro_members_and_tensor_closure() {
        for seed in 0..5 {
            let a: Ch = random_qccro(2, seed);
            assert!(is_qccro(&a).is_member);
            let b: Ch = random_qccro(2, seed + 100);
            assert!(is_qccro(&tensor(&a, &b)).is_member);
        }
    }

    #[test]
    fn generic_channels_are_not_free() {
        let r: Ch = random_channel(2, 3);
        let v = is_qccro(&r);
        assert!(!v.is_member);
        let sigma = v.witness_state.unwrap();
        let delta: Ch = dephasing(2);
        let lhs = delta.apply(&r.apply(&sigma).unwrap()).unwrap();
        let rhs = delta.apply(&r.apply(&delta.apply(&sigma).unwrap()).unwrap()).unwrap();
        assert!(lhs.matrix().dist(rhs.matrix()) > 1e-9);
    }

    #[test]
    fn vqa_enumeration_threads_agree() {
        let t = gate("T");
        let a = vqa_replaceable_set_r(&t, &[1], 1).unwrap();
        let b = vqa_replaceable_set_r_threads(&t, &[1], 1, 3).unwrap();
        assert_eq!(a, b);
        assert!(vqa_replaceable_set_r(&t, &[1], 4).is_err());
    }
}

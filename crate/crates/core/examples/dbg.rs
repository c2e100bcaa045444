use pswm::protocol::*;
use pswm::states::PointerKind;
use pswm::C64;

fn main() {
    let p = ProtocolParams::default().with_pointer(PointerKind::Coherent { beta: C64::new(1.0, 0.0) });
    let fo = nonpostselected_pointer(&p, ModelPath::FirstOrder).unwrap();
    let ex = nonpostselected_pointer(&p, ModelPath::Exact).unwrap();
    let base = 2f64.sqrt();
    println!("fo: mean {:+.8e} shift {:+.8e} var {:+.8e}", fo.q_mean, fo.q_mean - base, fo.q_variance);
    println!("ex: mean {:+.8e} shift {:+.8e} var {:+.8e}", ex.q_mean, ex.q_mean - base, ex.q_variance);
    println!("expected fo shift {:+.8e}", 0.105 * 0.01 * 0.9);

    // beam splitter 2x2 eigen check
    let bs = BeamSplitterSpec::new(0.6, 0.25, 1.1);
    let u = bs.scattering_matrix();
    println!("U = [{} {}; {} {}]", u[0][0], u[0][1], u[1][0], u[1][1]);
    let s = pswm::ModeSpace::new(8).unwrap();
    let v = bs.fock_unitary(s, s).unwrap();
    // check V|00> phase and V^dag a_t V on vacuum-ish states
    let a_t = pswm::fock::annihilator(s).tensor(&pswm::fock::identity(s));
    let a_r = pswm::fock::identity(s).tensor(&pswm::fock::annihilator(s));
    let lhs = v.dagger().matmul(&a_t).unwrap().matmul(&v).unwrap();
    let rhs1 = a_t.scale(u[0][0]).add(&a_r.scale(u[0][1])).unwrap();
    let rhs2 = a_t.scale(u[0][0].conj()).add(&a_r.scale(u[0][1].conj())).unwrap();
    let rhs3 = a_t.scale(u[0][0]).add(&a_r.scale(u[1][0])).unwrap();
    for (name, rhs) in [("U row", rhs1), ("U row conj", rhs2), ("U col", rhs3)] {
        let d = lhs.sub(&rhs).unwrap();
        let mut max = 0.0f64;
        for i in 0..36 { for j in 0..36 { max = max.max(d.matrix()[(i, j)].norm()); } }
        println!("{name}: block diff {max:.3e}");
    }
}

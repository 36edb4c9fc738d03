use exss_core::omnibus::corpus;
use exss_core::sseq::derived::DerivedCouple;
use exss_core::sseq::{PageIndex, SpectralSequence};
use std::time::Instant;

#[test]
fn probe_oracle() {
    let instances = corpus(10, 7000);
    let t0 = Instant::now();
    for (_, x) in &instances {
        let ss = SpectralSequence::new(x);
        let stab = ss.couple.stabilization_index();
        let mut oracle = DerivedCouple::initial(x, stab + 1);
        for r in 1..=stab + 1 {
            let page = ss.page(PageIndex::R(r));
            for (&(n, s), cell) in &page.cells {
                let (e_inv, _, _) = oracle.cell_invariants(n, s);
                assert_eq!(cell.sq.pres.invariant_factors(), e_inv);
            }
            if r <= stab {
                oracle = oracle.derive();
            }
        }
    }
    println!("oracle x10 to stabilization: {:?}", t0.elapsed());
}

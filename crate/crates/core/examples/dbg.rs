use padicle_core::linalg::{self, Matrix};
use padicle_core::orthogrp::{reflection, BilinearSpace, OrthMatrix};
use padicle_core::padic::PAdic;
use padicle_core::sampling::{Rng, Sampler};

fn main() {
    let mut rng = Rng::new(9);
    let sampler = Sampler::new(2, 16);
    for trial in 0..=114 {
        let form = sampler.diag_form(&mut rng, 3).unwrap();
        let space = BilinearSpace::from_quadspace(&form);
        let k = 1 + rng.below(2) as usize;
        let mut m = OrthMatrix::identity(&space);
        for _ in 0..(2 * k) {
            let v = sampler.anisotropic_vector(&mut rng, &space).unwrap();
            m = m.compose(&reflection(&space, &v).unwrap()).unwrap();
        }
        if trial < 114 { continue; }
        println!("diag={:?}", form.diag().iter().map(|x| format!("{x}")).collect::<Vec<_>>());
        let mut work = m.matrix().clone();
        for kk in 0..3usize {
            let mut b = vec![PAdic::zero(2); 3];
            b[kk] = PAdic::one(2, 16);
            let img = work.mul_vec(&b).unwrap();
            let u = linalg::vec_sub(&img, &b).unwrap();
            println!("step {kk}: img={:?}", img.iter().map(|x| format!("{x}")).collect::<Vec<_>>());
            if linalg::vec_is_zero(&u) { println!("  skip (fixed)"); continue; }
            let qu = space.quad(&u).unwrap();
            println!("  Q(u)={qu}");
            if !qu.is_zero() {
                let r = reflection(&space, &u).unwrap();
                work = r.matrix().mul(&work).unwrap();
            } else {
                let w = linalg::vec_add(&img, &b).unwrap();
                let qw = space.quad(&w).unwrap();
                println!("  degenerate branch Q(w)={qw}");
                let r1 = reflection(&space, &w).unwrap();
                let r2 = reflection(&space, &b).unwrap();
                work = r2.matrix().mul(&r1.matrix().mul(&work).unwrap()).unwrap();
            }
            let chk = work.mul_vec(&b).unwrap();
            println!("  after: work b = {:?}", chk.iter().map(|x| format!("{x}")).collect::<Vec<_>>());
        }
        let id = Matrix::identity(2, 3, 16);
        println!("reached identity: {}", work.eq_approx(&id));
    }
}

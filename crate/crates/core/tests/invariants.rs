use std::collections::BTreeMap;

use proptest::prelude::*;

use mixfrob::io::{parse_json, render, to_value, StructureJson};
use mixfrob::jet::{JMat, JetRing};
use mixfrob::limit_mhs::{limit_mixed, NilpotentData};
use mixfrob::linalg::{Flag, QMat, QSubspace};
use mixfrob::trtlep::{check_mixed_trtlep, section_conditions, tate_twist, FrobTypeStructure, MixedTrTLEPData};
use mixfrob::unfolding::{extend_pairings, universal_unfold};
use mixfrob::verify::suite::try_instance;
use mixfrob::Rat;

fn config() -> ProptestConfig {
    ProptestConfig::with_cases(32)
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn twist_is_an_involution(seed in 0u64..300, two_l in -5i64..=5) {
        let Some(inst) = try_instance(seed, 3) else { return Ok(()) };
        let l = Rat::new(two_l, 2);
        let tw = tate_twist(&inst.data, &l).unwrap();
        prop_assert!(check_mixed_trtlep(&tw).passed());
        prop_assert_eq!(tate_twist(&tw, &-&l).unwrap(), inst.data.clone());
        for (k, g) in &inst.data.pairings {
            prop_assert_eq!(&tw.pairings[&(k + two_l as i32)], g);
        }
    }

    #[test]
    fn twist_rejects_non_half_integers(seed in 0u64..300, num in 1i64..5) {
        let Some(inst) = try_instance(seed, 2) else { return Ok(()) };
        prop_assert!(tate_twist(&inst.data, &Rat::new(2 * num + 1, 4)).is_err());
    }

    #[test]
    fn euler_condition_shifts_with_twist(seed in 0u64..300, two_l in -4i64..=4, offset in -2i64..=2) {
        let Some(inst) = try_instance(seed, 3) else { return Ok(()) };
        let l = Rat::new(two_l, 2);
        let tw = tate_twist(&inst.data, &l).unwrap();
        let d = &inst.charge + &Rat::int(offset);
        let before = section_conditions(&inst.data.frob, &inst.zeta, &d).unwrap();
        let after = section_conditions(&tw.frob, &inst.zeta, &(&d + &Rat::int(two_l))).unwrap();
        prop_assert_eq!(before.ec, after.ec);
        prop_assert_eq!(before.ec, offset == 0);
        prop_assert_eq!((before.gc, before.ic), (after.gc, after.ic));
    }

    #[test]
    fn universal_unfolding_on_suite(seed in 0u64..300, n in 1u32..=3) {
        let Some(inst) = try_instance(seed, 3) else { return Ok(()) };
        let f = &inst.data.frob;
        let (res, cert) = universal_unfold(&inst.data, &inst.zeta, n).unwrap();
        prop_assert!(cert.passed(), "{:?}", cert.failures());
        let images: Vec<Vec<Rat>> = f.c.iter().map(|c| c.at0().mul_vec(&inst.zeta)).collect();
        prop_assert_eq!(res.new_vars() + QSubspace::span(f.rank(), &images).dim(), f.rank());
        let flags = section_conditions(&res.data.frob, &inst.zeta, &inst.charge).unwrap();
        prop_assert!(flags.gc && flags.ic && flags.idc && flags.ec);
        let (_, pcert) = extend_pairings(&res, &inst.data.pairings);
        prop_assert!(pcert.passed());
    }

    #[test]
    fn structure_json_roundtrip(seed in 0u64..300) {
        let Some(inst) = try_instance(seed, 2) else { return Ok(()) };
        let text = render(&to_value(&StructureJson::of(&inst.data)));
        let back: StructureJson = parse_json(&text).unwrap();
        prop_assert_eq!(back.build().unwrap(), inst.data);
        prop_assert_eq!(render(&to_value(&back)), text);
    }

    #[test]
    fn limit_weights_count_jordan_blocks(sizes in prop::collection::vec(1usize..=5, 1..4)) {
        let (t, nil) = jordan_sum(&sizes);
        let (lim, cert) = limit_mixed(&t, &nil).unwrap();
        prop_assert!(cert.passed(), "{:?}", cert.failures());
        prop_assert_eq!(lim.frob.rank(), sizes.len());
        for k in 0..6i32 {
            let blocks = sizes.iter().filter(|&&s| s as i32 == k + 1).count();
            prop_assert_eq!(lim.weight.graded_dim(k), blocks);
        }
        prop_assert_eq!(nil.index as usize, *sizes.iter().max().unwrap());
    }
}

/// Direct sum of Jordan blocks `e_i -> e_{i+1}` with `V e_i = (s - 1 - 2i)/2 e_i`
/// and the antidiagonal pairing on each block.
fn jordan_sum(sizes: &[usize]) -> (MixedTrTLEPData, NilpotentData) {
    let r: usize = sizes.iter().sum();
    let mut n = QMat::zeros(r, r);
    let mut v = QMat::zeros(r, r);
    let mut g = QMat::zeros(r, r);
    let mut off = 0;
    for &s in sizes {
        for i in 0..s {
            if i + 1 < s {
                n[(off + i + 1, off + i)] = Rat::one();
            }
            v[(off + i, off + i)] = Rat::new(s as i64 - 1 - 2 * i as i64, 2);
            g[(off + i, off + s - 1 - i)] = Rat::one();
        }
        off += s;
    }
    let ring = JetRing::base(0, 2).unwrap();
    let frob = FrobTypeStructure::flat(&ring, vec![], JMat::zeros(&ring, r, r), JMat::constant(&ring, v));
    let data = MixedTrTLEPData { frob, weight: Flag::pure(r, 0), pairings: BTreeMap::from([(0, g)]) };
    (data, NilpotentData::new(n).unwrap())
}

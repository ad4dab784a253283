//! The bundled example corpus, generated from the built-in examples.
//!
//! `cargo run -p qg-cli --example write_corpus` rewrites `corpus/`; a test keeps the
//! checked-in files equal to [`bundled`].

use std::collections::BTreeMap;

use qg_core::category::FusionRing;
use qg_core::cbnorm::BlockMap;
use qg_core::corep::{EngineBridge, IrrTable};
use qg_core::hopf_engine::examples::{function_algebra, group_algebra, kac_paljutkin, FiniteGroup};
use qg_core::hopf_engine::QuantumGroup;
use qg_core::linalg::{c, CMat, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formats::{
    emit, BlockMapFile, Complex, DrinfeldFile, ElementFile, FusionRingFile, FusionValuesFile, HopfFile, MatchingFile,
    Space, TableFile, WordsFile, FORMAT_VERSION,
};

/// Entries with three decimals keep the files readable and exactly representable in text.
fn rounded(rng: &mut ChaCha8Rng) -> C64 {
    let mut draw = || (rng.gen_range(-1.0..1.0) * 1000.0_f64).round() / 1000.0;
    c(draw(), draw())
}

fn random_blocks(rng: &mut ChaCha8Rng, table: &IrrTable) -> BTreeMap<usize, CMat> {
    (0..table.len())
        .map(|a| {
            let d = table.dims[a];
            let mut m = CMat::from_fn(d, d, |_, _| rounded(rng));
            if a == table.trivial {
                m[(0, 0)] = c(1.5, 0.0);
            }
            (a, m)
        })
        .collect()
}

fn values(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex> {
    (0..n).map(|_| rounded(rng).into()).collect()
}

/// `(file name, canonical text)` for every bundled datum.
pub fn bundled() -> Vec<(String, String)> {
    let mut files = Vec::new();
    let mut add = |name: &str, text: String| files.push((name.to_string(), text));

    let z2 = FiniteGroup::cyclic(2);
    let z3 = FiniteGroup::cyclic(3);
    let s3 = FiniteGroup::symmetric3();
    for (file, name, data) in [
        ("c_z2.qg", "C(Z2)", function_algebra(&z2)),
        ("c_z3.qg", "C(Z3)", function_algebra(&z3)),
        ("c_s3.qg", "C(S3)", function_algebra(&s3)),
        ("group_algebra_z2.qg", "C[Z2]", group_algebra(&z2)),
        ("group_algebra_z3.qg", "C[Z3]", group_algebra(&z3)),
        ("group_algebra_s3.qg", "C[S3]", group_algebra(&s3)),
        ("kac_paljutkin.qg", "Kac-Paljutkin", kac_paljutkin()),
    ] {
        add(file, emit(&HopfFile::from_data(name, &data)));
    }

    let s3_group = QuantumGroup::new(function_algebra(&s3)).expect("C(S3) is a valid Hopf algebra");
    let irr_s3 = EngineBridge::new(s3_group, 0).expect("C(S3) decomposes").table;
    let suq2 = IrrTable::su_q2_window(0.5, 3).expect("q = 0.5 is admissible");
    for (file, table) in [
        ("irr_s3.table", &irr_s3),
        ("group_dual_z2.table", &IrrTable::group_dual(&z2)),
        ("group_dual_z3.table", &IrrTable::group_dual(&z3)),
        ("suq2_window.table", &suq2),
    ] {
        add(file, emit(&TableFile::from_table(table)));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0);
    add("s3_multiplier.elem", emit(&ElementFile::new("irr_s3.table", &irr_s3, Space::Linf, &random_blocks(&mut rng, &irr_s3))));
    add("s3_polynomial.elem", emit(&ElementFile::new("irr_s3.table", &irr_s3, Space::Pol, &random_blocks(&mut rng, &irr_s3))));
    // The involution needs ρ = 1 on non-central blocks, so the SU_q(2) multiplier is central.
    let central: BTreeMap<usize, CMat> = (0..suq2.len())
        .map(|a| (a, CMat::identity(suq2.dims[a], suq2.dims[a]) * if a == suq2.trivial { c(1.5, 0.0) } else { rounded(&mut rng) }))
        .collect();
    add("suq2_multiplier.elem", emit(&ElementFile::new("suq2_window.table", &suq2, Space::Linf, &central)));

    // a = (1, 3) on the dual of Z2 acts on the minimal projections of C[Z2] by [[2, -1], [-1, 2]].
    let z2_mult = CMat::from_row_slice(2, 2, &[c(2.0, 0.0), c(-1.0, 0.0), c(-1.0, 0.0), c(2.0, 0.0)]);
    let z2_map = BlockMap::new("Z2 multiplier (1, 3)", vec![1, 1], vec![1, 1], z2_mult).expect("shapes match");
    add("z2_mult_1_3.map", emit(&BlockMapFile::from_map(&z2_map)));
    add("transpose_m2.map", emit(&BlockMapFile::from_map(&BlockMap::transpose(2))));

    let z3_labels = IrrTable::group_dual(&z3).labels;
    let s3_label = |dim: usize| {
        let a = (0..irr_s3.len()).find(|&a| a != irr_s3.trivial && irr_s3.dims[a] == dim).expect("S3 has this irreducible");
        irr_s3.labels[a].clone()
    };
    let words = WordsFile {
        format_version: FORMAT_VERSION,
        kind: "words".into(),
        factors: vec!["irr_s3.table".into(), "group_dual_z3.table".into()],
        words: vec![
            vec![],
            vec![(0, s3_label(2))],
            vec![(1, z3_labels[1].clone())],
            vec![(0, s3_label(2)), (1, z3_labels[2].clone())],
            vec![(1, z3_labels[1].clone()), (0, s3_label(1)), (1, z3_labels[1].clone())],
        ],
    };
    add("s3_z3.words", emit(&words));

    for (file, ring) in [
        ("rep_z2.fusion", FusionRing::rep_cyclic(2)),
        ("rep_s3.fusion", FusionRing::rep_s3()),
        ("temperley_lieb_0.8.fusion", FusionRing::temperley_lieb(0.8, 4).expect("q = 0.8 is admissible")),
    ] {
        add(file, emit(&FusionRingFile::from_ring(&ring)));
    }
    let pairing = FusionValuesFile {
        format_version: FORMAT_VERSION,
        kind: "fusion_values".into(),
        ring: "rep_s3.fusion".into(),
        theta: values(&mut rng, 3),
        omega: Some(values(&mut rng, 3)),
        f: Some(values(&mut rng, 3)),
        g: Some(values(&mut rng, 3)),
    };
    add("rep_s3.values", emit(&pairing));

    let identity: Vec<Vec<Complex>> =
        (0..9).map(|i| (0..9).map(|j| Complex(if i == j { 1.0 } else { 0.0 }, 0.0)).collect()).collect();
    let trivial = MatchingFile {
        format_version: FORMAT_VERSION,
        kind: "matching".into(),
        first: "c_z3.qg".into(),
        second: "group_algebra_z3.qg".into(),
        z: identity,
    };
    add("trivial_z3.matching", emit(&trivial));
    let drinfeld =
        DrinfeldFile { format_version: FORMAT_VERSION, kind: "drinfeld_double".into(), group: "c_z2.qg".into(), seed: 0 };
    add("drinfeld_z2.double", emit(&drinfeld));

    files
}

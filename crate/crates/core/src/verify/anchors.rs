/// Every identity and construction the suites are expected to exercise.
/// Each record's `paper_anchor` is one of these; a full run covers all.
pub const ANCHORS: &[&str] = &[
    "operator/saint-venant",
    "operator/inner-derivative",
    "operator/generalized-saint-venant",
    "operator/alternation-r",
    "operator/r-w-relations",
    "operator/restricted-saint-venant-relation",
    "tensor/symmetrization",
    "tensor/index-restriction",
    "tensor/block-symmetrization-relation",
    "moment/ray-transform",
    "moment/extended-transform",
    "moment/i-to-j-conversion",
    "moment/moment-stack",
    "moment/restricted-transform-recovery",
    "moment/john-operator",
    "moment/john-power-identity",
    "moment/kernel-derivative-lemma",
    "moment/higher-order-kernel-lemma",
    "moment/translation-invariance",
    "moment/homogeneity",
    "moment/collapsed-derivative-identity",
    "moment/restriction-contraction",
    "moment/integration-by-parts",
    "moment/decay-diagnostic",
    "theorem/kernel-equivalence",
    "theorem/potential-characterization",
];

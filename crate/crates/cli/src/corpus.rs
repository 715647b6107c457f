//! Golden documents with the exit codes the CLI must produce on them.

pub struct Case {
    pub args: &'static [&'static str],
    pub exit: i32,
}

pub const DOCS: &[(&str, &str)] = &[
    ("bad_diagonal", include_str!("../corpus/bad_diagonal.alg")),
    ("bad_field", include_str!("../corpus/bad_field.alg")),
    ("bad_rank", include_str!("../corpus/bad_rank.alg")),
    ("bad_syntax", include_str!("../corpus/bad_syntax.alg")),
    ("bad_undeclared", include_str!("../corpus/bad_undeclared.alg")),
    ("e0", include_str!("../corpus/e0.alg")),
    ("e00", include_str!("../corpus/e00.alg")),
    ("e01", include_str!("../corpus/e01.alg")),
    ("e02", include_str!("../corpus/e02.alg")),
    ("e0_forms", include_str!("../corpus/e0_forms.alg")),
    ("e0_itemized", include_str!("../corpus/e0_itemized.alg")),
    ("e0doubleprime", include_str!("../corpus/e0doubleprime.alg")),
    ("e0prime", include_str!("../corpus/e0prime.alg")),
    ("e0prime_lie", include_str!("../corpus/e0prime_lie.alg")),
    ("mixed", include_str!("../corpus/mixed.alg")),
    ("not_almost_lie", include_str!("../corpus/not_almost_lie.alg")),
    ("tangent3", include_str!("../corpus/tangent3.alg")),
];

/// Invocations and their expected exit codes; `corpus:NAME` refers to [`DOCS`].
pub const CASES: &[Case] = &[
    Case { args: &["check", "corpus:e0"], exit: 0 },
    Case { args: &["lie", "corpus:e0"], exit: 1 },
    Case { args: &["jacobiator", "corpus:e0", "--triples", "X11,X21,X22;X11,X12,X22"], exit: 0 },
    Case { args: &["jacobiator", "corpus:e0"], exit: 1 },
    Case { args: &["check", "corpus:e0_itemized"], exit: 1 },
    Case { args: &["check", "corpus:e0prime"], exit: 0 },
    Case { args: &["lie", "corpus:e0prime_lie"], exit: 0 },
    Case { args: &["lie", "corpus:e0doubleprime"], exit: 0 },
    Case { args: &["lie", "corpus:e00"], exit: 0 },
    Case { args: &["lie", "corpus:e01"], exit: 0 },
    Case { args: &["lie", "corpus:e02"], exit: 0 },
    Case { args: &["lie", "corpus:tangent3"], exit: 0 },
    Case { args: &["check", "corpus:not_almost_lie"], exit: 1 },
    Case { args: &["nijenhuis", "corpus:e0", "--endo", "J"], exit: 0 },
    Case { args: &["connection-report", "corpus:e0", "--connection", "torsion_free"], exit: 0 },
    Case { args: &["connection-report", "corpus:mixed", "--connection", "nabla"], exit: 0 },
    Case { args: &["charclass", "corpus:e0", "--connection", "torsion_free", "--max-k", "2"], exit: 0 },
    Case { args: &["transgression", "corpus:e0", "--c1", "flat", "--c2", "torsion_free", "--k", "2", "--max-degree", "2"], exit: 0 },
    Case { args: &["cohomology", "corpus:e0_forms", "--form", "trR"], exit: 0 },
    Case { args: &["courant", "corpus:e0_forms", "--max-degree", "1"], exit: 1 },
    Case { args: &["obstruction", "corpus:e0", "--triple", "X11,X21,X12", "--max-degree", "2"], exit: 0 },
    Case { args: &["check", "builtin:E0"], exit: 0 },
    Case { args: &["lie", "builtin:E0"], exit: 1 },
    Case { args: &["check", "corpus:bad_diagonal"], exit: 2 },
    Case { args: &["check", "corpus:bad_field"], exit: 2 },
    Case { args: &["check", "corpus:bad_syntax"], exit: 2 },
    Case { args: &["check", "corpus:bad_undeclared"], exit: 2 },
    Case { args: &["check", "corpus:bad_rank"], exit: 2 },
    Case { args: &["check", "corpus:missing"], exit: 2 },
    Case { args: &["check", "builtin:E9"], exit: 2 },
    Case { args: &["nijenhuis", "corpus:e0", "--endo", "K"], exit: 2 },
    Case { args: &["check", "--frobnicate", "corpus:e0"], exit: 2 },
    Case { args: &["frobnicate"], exit: 2 },
    Case { args: &[], exit: 2 },
];

pub fn source(name: &str) -> Option<&'static str> {
    DOCS.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

"""Path-complete Lyapunov analysis for discrete-time switched linear systems."""

from .graphs import (
    GraphError,
    GraphParseError,
    LabeledGraph,
    ObserverGraph,
    brute_force_path_complete,
    build_observer,
    enumerate_co_complete_graphs,
    format_graph,
    is_co_complete,
    is_complete,
    is_path_complete,
    load_graph,
    parse_graph,
    save_graph,
    word_realizable,
)
from .linalg import (
    QuadraticForm,
    eval_form,
    is_psd,
    load_matrix_set,
    pullback,
    save_matrix_set,
    symmetric_eigenvalues,
)
from .sdp import (
    LmiCertificate,
    LmiConstraint,
    LmiProblem,
    NotFound,
    VerificationReport,
    solve_feasibility,
    verify_certificate,
)
from .lyapunov import (
    GammaInterval,
    MinMaxClf,
    NotPathCompleteWarning,
    Pclf,
    SwitchingSystem,
    Trajectory,
    build_lmi_problem,
    check_monotone_decrease,
    eval_clf,
    extract_clf,
    find_pclf,
    gamma_bisect,
    load_pclf,
    min_max_step_check,
    save_pclf,
    simulate,
    spectral_radius,
    verify_pclf,
    write_trajectory_csv,
)
from .comparison import (
    ComparisonCertificate,
    SelectorPair,
    apply_certificate,
    certificate_from_json,
    certificate_to_json,
    find_comparison_certificate,
    lambda_admissible,
    load_certificate,
    save_certificate,
    selector_matrices,
    synthesize_worst_case_vlfc,
    verify_comparison_certificate,
)

__version__ = "0.1.0"

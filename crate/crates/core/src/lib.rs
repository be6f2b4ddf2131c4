//! Spherical tori with finite monodromy: basic triangles on Platonic solids,
//! hemisphere attachment, exact counts, monodromy groups, dessins and a
//! numeric genus-0 Belyi solver.

pub mod atlas;
pub mod belyi;
pub mod counting;
pub mod dessin;
pub mod error;
pub mod golden;
pub mod monodromy;
pub mod rational;
pub mod solids;
pub mod sphere;

pub use atlas::{
    attach_hemisphere, balance_class, decompose_balanced, enumerate_basic, enumerate_dihedral, exists_triangle,
    realize_geometry, table1_rows, AtlasEntry, AtlasFamily, BalanceClass, CornerAngles, Decomposition, EdgeLabel,
    Existence, Note, SphericalTriangle, Table1Row,
};
pub use belyi::{certify, newton_solve, phi_residual, Configuration, NewtonOptions, SolveResult};
pub use counting::{
    count, dahmen_ordinary, dahmen_projective, lattice_oracle, table2_rows, total_for_n, CountMethod, CountQuery,
    CountReport, GroupScope, Table2Row,
};
pub use dessin::{
    check_riemann_hurwitz, enumerate_dessins, export_graph, passport_for, DessinMap, Form, GraphFormat, Passport,
    TriangleGroup,
};
pub use error::{Error, Result};
pub use monodromy::{
    dihedral_groups_from_params, groups_from_triangle, params_from_lengths, shift_params, table3_rows, CenterImage,
    MonodromyParams, MonodromyProfile, Table3Row,
};
pub use rational::Rational;
pub use solids::{build_solid, compute_q, graph_distance, SolidFamily, SolidSpec};
pub use sphere::{
    axial_reflection, close_group, identify_group, lift_gamma, FiniteMatrixGroup, GroupElement, GroupLabel,
    ProjectiveElement, RotationElement, SpatialRotation, UnitVector, UnitaryElement,
};

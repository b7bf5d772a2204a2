#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <nlohmann/json.hpp>

#include "twoproj/core.hpp"

namespace twoproj {

/// A pair of orthogonal projections on the same space.
struct ProjectionPair {
    CMatrix P;
    CMatrix Q;
    Index dim() const { return P.rows(); }
};

/// Validate and package two projections. Throws InvalidInput with both
/// residuals when either fails validate_projection at `tol`.
ProjectionPair projection_pair(CMatrix p, CMatrix q, double tol = 1e-9);

/// Canonical six-space model of a projection pair.
///
/// Columns of U are ordered H0 | H1 | H'_P | H'_Q | H2 | H3 where
/// H0 = ran P ∩ ker Q, H1 = ran P ∩ ran Q, H2 = ker P ∩ ran Q,
/// H3 = ker P ∩ ker Q and the two H' blocks carry the generic part.
/// In these coordinates P and Q are exactly the block model with
/// S = diag(s) and X = sqrt(S(I-S)).
struct HalmosForm {
    Index d0 = 0, d1 = 0, d2 = 0, d3 = 0;
    Index dg = 0;
    CMatrix U;
    std::vector<double> s;  ///< descending, strictly inside (tol_used, 1 - tol_used)
    double tol_used = 1e-8;

    Index dim() const { return d0 + d1 + d2 + d3 + 2 * dg; }
    /// Column offsets of each block inside U.
    Index off_h1() const { return d0; }
    Index off_gp() const { return d0 + d1; }
    Index off_gq() const { return d0 + d1 + dg; }
    Index off_h2() const { return d0 + d1 + 2 * dg; }
    Index off_h3() const { return d0 + d1 + 2 * dg + d2; }
};

/// Halmos decomposition with eigenvalue clustering threshold `tol_cluster`
/// (must lie in (0, 1/4)). Throws NumericalError ("inconsistent generic
/// part") when the ker P side does not reproduce the pairing built from ran P.
HalmosForm decompose(const ProjectionPair& pair, double tol_cluster = 1e-8);

/// The model blocks (P_model, Q_model) in U coordinates.
ProjectionPair model_blocks(const HalmosForm& form);

/// Rebuild (U P_model U*, U Q_model U*).
ProjectionPair reconstruct(const HalmosForm& form);

struct PrincipalAngles {
    std::vector<double> angles;  ///< ascending, in [0, pi/2]
    Index zero_count = 0;        ///< angles below angle_tol (intersection dimension)
    Index right_count = 0;       ///< angles within angle_tol of pi/2
};

/// Principal angles between ran P and ran Q, length min(rank P, rank Q).
/// Small angles come from sines and large ones from cosines so both ends stay accurate.
PrincipalAngles principal_angles(const ProjectionPair& pair, double angle_tol = 1e-6);

/// Complete unitary invariant: block dimensions plus the generic spectrum in
/// units of 1e-6 (rounded), sorted descending.
struct Fingerprint {
    std::array<Index, 4> d{};
    std::vector<std::int64_t> s_micro;
    bool operator==(const Fingerprint&) const = default;
};

Fingerprint unitary_equivalence_fingerprint(const ProjectionPair& pair, double tol_cluster = 1e-8);

/// {"d":[d0,d1,d2,d3], "dg":k, "s":[...], "U": matrix, "tol": t}
nlohmann::json to_json(const HalmosForm& form);
HalmosForm halmos_from_json(const nlohmann::json& j);

}  // namespace twoproj

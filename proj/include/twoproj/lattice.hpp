#pragma once

#include <optional>

#include "twoproj/halmos.hpp"

namespace twoproj {

/// Quantitative closedness data for ran P + ran Q.
///
/// In finite dimension the sum is always closed; `gap_to_one` is the
/// distance from 1 to the part of sigma(PQP) below the 1-cluster, and its
/// decay across a truncation family signals a non-closed limit.
struct SpanCertificate {
    double gap_to_one = 1.0;
    double epsilon = 0.0;       ///< largest eigenvalue of PQP below the 1-cluster (or 0)
    double window_hi = 1.0;     ///< (epsilon, window_hi) contains no eigenvalue of PQP
    bool closed = true;
    Index rank_R = 0;           ///< d0 + d1 + 2 dg + d2
};

/// Projection onto ran P ∩ ran Q, read off the H1 block of the Halmos form.
CMatrix meet(const ProjectionPair& pair, double tol_cluster = 1e-8);
CMatrix meet(const HalmosForm& form);

/// Projection onto ran P + ran Q as 1_[eps, .](P+Q) with eps half the
/// smallest eigenvalue above the zero cluster (eigenvalues <= zero_tol).
/// The default zero_tol, tol_cluster/2, matches the Halmos classification:
/// a generic value s contributes 1 - sqrt(s) ≈ (1 - s)/2 to sigma(P+Q).
CMatrix join(const ProjectionPair& pair, std::optional<double> zero_tol = std::nullopt,
             double tol_cluster = 1e-8);

/// 1 - max{lambda in sigma(PQP) : lambda <= 1 - tol_cluster}, or 1 when there is none.
double gap_to_one(const ProjectionPair& pair, double tol_cluster = 1e-8);

SpanCertificate span_certificate(const ProjectionPair& pair, double tol_cluster = 1e-8);
SpanCertificate span_certificate(const ProjectionPair& pair, const HalmosForm& form);

/// R = 1_[eps, .](P + (I-P)Q(I-P)); eps defaults to half the smallest
/// eigenvalue above the zero cluster (eigenvalues <= tol_cluster).
CMatrix span_projection_algebraic(const ProjectionPair& pair,
                                  std::optional<double> epsilon = std::nullopt,
                                  double tol_cluster = 1e-8);

/// Compress (P - R#, Q - R#) to (ran R#)^⊥ in an orthonormal basis of the
/// complement. Requires P R# = R# = Q R#; throws InvalidInput with the residual otherwise.
ProjectionPair reduce_by_common_subspace(const ProjectionPair& pair, const CMatrix& r_sharp,
                                         double tol = 1e-9);

}  // namespace twoproj

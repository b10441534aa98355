#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "simplexwalk/rng.hpp"

namespace swalk {

/// Urn walk state. L and R are real-valued ball masses, S = L + R.
struct UrnState {
  double z = 0.5;
  double L = 1.0;
  double R = 1.0;
  std::size_t n = 1;

  double zeta() const { return L / (L + R); }
  double eps() const { return 1.0 / (L + R); }
};

UrnState urn_initial(double z1 = 0.5);

/// Two uniforms in fixed order: direction U, then jump xi.
/// U < zeta: L += z, z <- xi z. Otherwise R += 1 - z, z <- (1 - xi) z + xi.
UrnState urn_step(const UrnState& state, RngStream& rng);

/// (1/2 - (L + z)/S)^2 + 1/S.
double lyapunov_W(const UrnState& state);

struct DriftPolys {
  std::array<double, 6> r{};
  double r0_factored = 0.0;
};

/// r_0..r_5 at (zeta, z); r[0] is the expanded form of r_0, r0_factored the
/// product form -3 (2 zeta - 1)^2 (zeta z + (1 - z)(1 - zeta)).
DriftPolys drift_polynomials(double zeta, double z);

/// eps * sum r_i eps^i / (6 (eps z + 1)^2 (1 + eps (1 - z))^2).
double drift_closed_form(double zeta, double z, double eps);

struct DriftBranches {
  double left = 0.0;   // E[W' - W | left move]
  double right = 0.0;  // E[W' - W | right move]
  double drift = 0.0;  // zeta * left + (1 - zeta) * right
};

/// E(W_{n+1}) - W_n from exact means of the two quadratic branches, with
/// L = zeta/eps and R = (1 - zeta)/eps. z = 0 has no left move, z = 1 no
/// right move. Throws DomainError outside zeta, z in [0, 1], eps > 0.
DriftBranches drift_branches(double zeta, double z, double eps);
double drift_oracle(double zeta, double z, double eps);

/// eps^5 coefficient of the drift numerator, from the oracle at the nodes
/// eps = 1..6 by divided differences.
double r5_from_oracle(double zeta, double z);

struct UrnRow {
  std::size_t n = 0;
  double z = 0.0;
  double L = 0.0;
  double R = 0.0;
  double zeta = 0.0;
  double W = 0.0;
};

UrnRow urn_row(const UrnState& s);

/// Trajectory from n = 1 to n = n_steps on stream `stream`, recording n = 1,
/// every record_every-th state and the final state.
std::vector<UrnRow> run_urn(std::size_t n_steps, std::uint64_t seed, std::size_t record_every, double z1 = 0.5,
                            std::uint64_t stream = 0);

/// States of run i (stream i) at each checkpoint n (ascending), for `runs`
/// independent runs. Result[i][c] is run i at checkpoints[c].
std::vector<std::vector<UrnState>> urn_ensemble(std::size_t runs, std::vector<std::size_t> checkpoints,
                                                std::uint64_t seed, unsigned threads = 1, double z1 = 0.5);

struct CouplingConfig {
  std::size_t n_total = 100000;
  std::size_t N0 = 10000;
  double eps_band = 0.1;
  std::uint64_t seed = 0;
  std::size_t record_every = 1000;
  double z1 = 0.5;

  /// Throws InvalidParameter unless 0 <= eps_band < 1/2 and 1 <= N0 < n_total.
  void validate() const;
};

struct CouplingRow {
  UrnRow main;
  double z_tilde = 0.0;
  double z_hat = 0.0;
  bool sandwich_ok = true;
};

struct CouplingResult {
  std::vector<CouplingRow> rows;  // recorded steps
  bool event_A = true;            // zeta_n in the band for every n in [N0, n_total]
  std::size_t sandwich_failures = 0;  // steps n >= N0 with z_hat <= z <= z_tilde broken
  std::size_t first_failure = 0;      // step index of the first failure (0 when none)
};

/// Main walk, tilde walk (left threshold 1/2 - eps_band) and hat walk
/// (1/2 + eps_band) driven by the same (U, xi); all three coincide up to N0.
/// The sandwich is checked at every step n >= N0.
CouplingResult coupled_run(const CouplingConfig& config, std::uint64_t stream = 0);

/// Walk with the left threshold frozen at `threshold` from the first step.
double frozen_walk(double threshold, std::size_t steps, RngStream& rng, double z1 = 0.5);

/// Terminal values of `chains` frozen walks, chain i on stream i.
std::vector<double> frozen_ensemble(double threshold, std::size_t steps, std::size_t chains, std::uint64_t seed,
                                    unsigned threads = 1, double z1 = 0.5);

}  // namespace swalk

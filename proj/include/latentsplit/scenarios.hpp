#pragma once

#include <cmath>
#include <ostream>

#include "latentsplit/network.hpp"

namespace latentsplit {

/// Triangle with parties A, B, C and sources alpha (B,C), beta (A,C), gamma (A,B).
CausalNetwork triangle_network(std::size_t card);

struct Rgb4Params {
  double u = 0.85;
  double lambda0 = std::sqrt(2.0 / 3.0);
  double v_alpha = 1.0;
  double v_beta = 1.0;
  double v_gamma = 1.0;
};

/// Two-qubit sources v|psi><psi| + (1-v) I/4 with |psi> = l0|01> + l1|10>,
/// and four-outcome measurements {|00>, u|01>+w|10>, w|01>-u|10>, |11>}
/// with w = sqrt(1-u^2). Party slot order is A(beta,gamma), B(gamma,alpha),
/// C(alpha,beta); each source sends its first qubit to the party that holds
/// it in its own first slot. Throws ParamOutOfRange.
QuantumStrategy rgb4_strategy(const Rgb4Params& p);

struct FritzParams {
  double epsilon = 0.2;
  double visibility = 1.0;
};

/// alpha and beta carry classical bits with p(1) = epsilon; gamma holds
/// v|Phi><Phi| + (1-v) I/4 with |Phi> = (|00>+|11>)/sqrt2. Alice measures
/// sigma_z / sigma_x for beta = 0 / 1, Bob (sigma_x - sigma_z)/sqrt2 and
/// (sigma_z + sigma_x)/sqrt2 for alpha = 0 / 1, Charlie outputs alpha AND beta.
/// Throws ParamOutOfRange.
QuantumStrategy fritz_strategy(const FritzParams& p);

struct FritzTables {
  Behavior obs;
  Behavior int_alpha;      ///< alpha->B split
  Behavior int_beta;       ///< beta->A split
  Behavior int_alphabeta;  ///< both
};

FritzTables fritz_tables(const FritzParams& p);

/// Instrumental scenario: input X (binary) feeds A, A feeds B, and the source
/// "lambda" holds v|Phi><Phi| + (1-v) I/4. A measures sigma_z / sigma_x for
/// x = 0 / 1 and B measures (sigma_z +- sigma_x)/sqrt2 selected by a.
QuantumStrategy instrumental_strategy(double visibility = 1.0);

/// Unrelated confounders: gamma feeds A and B, alpha feeds B and C, and B
/// feeds A and C. Both sources hold v|Phi><Phi| + (1-v) I/4. B measures the
/// parity sigma_z (x) sigma_z; A and C measure sigma_z / sigma_x selected by b.
QuantumStrategy uc_strategy(double visibility = 1.0);

/// CSV with header "a,b,c,p" (party names lowercased) and 17 significant digits.
void write_table_csv(std::ostream& out, const Behavior& table);

}  // namespace latentsplit

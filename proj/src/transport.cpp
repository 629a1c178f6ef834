#include "biasaudit/transport.hpp"

namespace biasaudit {

template FlowPlan<double> solve_transport(const TransportProblem<double>&);
template double emd(const Signature<double>&, const Signature<double>&);
template double emd_1d_oracle(const Signature<double>&, const Signature<double>&);

}  // namespace biasaudit

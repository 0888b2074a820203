#include <stdexcept>

#include "boolbias/complexity.hpp"

namespace boolbias {

int k_dnf(const BooleanFunction& f) {
  return objective_value(min_dnf(f, Objective::Literals), Objective::Literals);
}

int k_theta(const BooleanFunction& f) {
  return objective_value(min_dnf(f, Objective::LiteralsPlusClauses),
                         Objective::LiteralsPlusClauses);
}

int k_clause(const BooleanFunction& f) {
  return 2 * objective_value(min_dnf(f, Objective::Clauses), Objective::Clauses);
}

bool sandwich_holds(const ComplexityReport& r) {
  const int k = r.k_dnf;
  if (k == 0) return r.k_theta == 0 && r.k_clause == 0;
  const int per_clause = (k + r.n - 1) / r.n;
  int ceil_pow = 1;
  while (ceil_pow < k) ceil_pow *= 2;
  return k + per_clause <= r.k_theta && r.k_theta <= k + ceil_pow &&
         per_clause <= r.k_clause / 2;
}

ComplexityReport complexity_report(const BooleanFunction& f) {
  ComplexityReport r;
  r.n = f.n();
  r.k_dnf = k_dnf(f);
  r.k_theta = k_theta(f);
  r.k_clause = k_clause(f);
  r.k_lz = k_lz(f);
  if (!sandwich_holds(r)) throw std::logic_error("complexity sandwich violated");
  return r;
}

}  // namespace boolbias

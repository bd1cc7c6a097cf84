#include "fqsde/adapted_process.hpp"

#include <algorithm>
#include <string>

#include "fqsde/errors.hpp"

namespace fqsde {

AdaptedProcess::AdaptedProcess(SpacePtr space, std::vector<CliffordElement> values, double tol)
    : space_(std::move(space)), values_(std::move(values)) {
  if (!space_) throw DomainError("adapted process needs a space");
  if (values_.size() > static_cast<std::size_t>(space_->grid().n()) + 1)
    throw DomainError("adapted process has more values than grid nodes");
  for (std::size_t k = 0; k < values_.size(); ++k) {
    const CliffordElement& v = values_[k];
    if (v.space_ptr() != space_) throw DomainError("adapted process value belongs to another space");
    const FiltrationLevel level = space_->node_level(static_cast<int>(k));
    const double defect = level_defect(v, level);
    const double scale = std::max(1.0, lp_norm(v, 2.0));
    if (defect > tol * scale)
      throw ContractViolation("process value at node " + std::to_string(k) + " is not adapted (defect " +
                              std::to_string(defect) + " outside level " + std::to_string(level.k) + ")");
  }
}

AdaptedProcess AdaptedProcess::constant(const CliffordElement& value, int count) {
  return AdaptedProcess(value.space_ptr(), std::vector<CliffordElement>(static_cast<std::size_t>(count), value));
}

AdaptedProcess AdaptedProcess::zero(const SpacePtr& space, int count) {
  return constant(CliffordElement::zero(space), count);
}

double AdaptedProcess::adaptedness_defect() const {
  double worst = 0.0;
  for (int k = 0; k < size(); ++k) worst = std::max(worst, level_defect((*this)[k], space_->node_level(k)));
  return worst;
}

}  // namespace fqsde

#include "qcav/constants.hpp"

#include "qcav/errors.hpp"

namespace qcav {

void PhysicalConstants::validate() const {
  if (!(hbar > 0.0) || !(e_charge > 0.0) || !(k_B > 0.0) || !(m_he3 > 0.0) ||
      !(m_he4 > 0.0)) {
    throw DomainError("physical constants must all be strictly positive");
  }
}

}  // namespace qcav

#ifndef SRM_TEST_SUPPORT_HPP
#define SRM_TEST_SUPPORT_HPP

#include <Eigen/Core>
#include <string>

#include "srm/structure.hpp"

namespace testing {

inline std::string data_path(const std::string& name) { return std::string(SRM_DATA_DIR) + "/" + name; }

inline const srm::SRStructure& heisenberg() {
  static const srm::SRStructure s = srm::load_structure(data_path("heisenberg.srm"));
  return s;
}
inline const srm::SRStructure& grushin() {
  static const srm::SRStructure s = srm::load_structure(data_path("grushin.srm"));
  return s;
}
inline const srm::SRStructure& martinet() {
  static const srm::SRStructure s = srm::load_structure(data_path("martinet.srm"));
  return s;
}

inline Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double c : v) x[i++] = c;
  return x;
}

}  // namespace testing

#endif

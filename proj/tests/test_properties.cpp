#include "support/properties.hpp"

#include <doctest.h>

using namespace srkit::test;

namespace {

void require(const PropertyResult& r) {
  INFO(r.cases << " cases, " << r.failures << " failures; first: " << r.first_failure);
  CHECK(r.passed());
}

}  // namespace

TEST_CASE("bracket antisymmetry and Jacobi on 200 triples") { require(bracket_identities(20240101, 200)); }
TEST_CASE("operator antisymmetry and apply/compose coherence") { require(operator_identities(77, 150)); }
TEST_CASE("grading additivity") { require(grading_additivity(5, 200)); }
TEST_CASE("homogeneous component partition") { require(component_partition(6, 200)); }
TEST_CASE("phi injectivity") { require(phi_injectivity()); }
TEST_CASE("degree of the commutator with the sum of squares") { require(commutator_degree(9, 12)); }
TEST_CASE("norm coherence and gradient duality on 200 covectors x 4 frames") { require(hamiltonian_coherence(13, 200)); }
TEST_CASE("integration by parts") { require(integration_by_parts(17, 60)); }
TEST_CASE("deficit scaling under dilations") { require(deficit_scaling(19, 6)); }

// Walks a massive particle through a frame in a sub/sup superposition and
// prints what the old frame looks like from the new one.

#include <cmath>
#include <cstdio>

#include "sqrf/qrf.hpp"

using namespace sqrf;

int main() {
  const GridSpec g = GridSpec::uniform(-3, 3, 61);  // h = 0.1
  const SystemSpec a("A", 1.0, false, g);
  const SystemSpec b("B", 1.0, false, g);

  // A is either moving at rapidity 0.5 or superluminal with φ̃ = 0.5.
  const Mode a_sub{Sector::Outgoing, 1, 1, 0, *g.locate(0.5)};
  const Mode a_sup{Sector::Outgoing, -1, 1, 0, *g.locate(0.5)};
  const Mode b_ket{Sector::Outgoing, 1, 1, 0, *g.locate(1.2)};
  const double r = 1 / std::sqrt(2.0);
  const StateVector s = StateVector::from_kets({a, b}, {{{a_sub, b_ket}, r}, {{a_sup, b_ket}, r}});

  const StateVector raw = qrf_transform(s, {});
  const StateVector fin = reinterpret_state(raw);

  for (const StateVector* st : {&raw, &fin}) {
    std::printf(st == &raw ? "raw\n" : "reinterpreted\n");
    for (const auto& e : st->entries()) {
      const JointKet k = st->decode_joint(e.index);
      const TwoMomentum qb = mode_momentum(st->system("B"), k[0]);
      const TwoMomentum qc = mode_momentum(st->system("C"), k[1]);
      std::printf("  B (%+.4f, %+.4f) %-8s  C (%+.4f, %+.4f)  |amp|^2 %.3f\n", qb.e, qb.p,
                  std::string(to_string(k[0].sector)).c_str(), qc.e, qc.p, std::norm(e.value));
    }
  }
  std::printf("B-C entanglement: %.6f bit\n", entanglement_entropy(fin, {"B"}));
}

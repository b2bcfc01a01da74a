#include "chsc/model.hpp"

#include <cassert>
#include <cmath>

namespace chsc {

scalar_t f1_log(scalar_t r, int order, scalar_t sep_eps, ClampMonitor* monitor) {
  assert(order >= 0 && order <= 3);
  const scalar_t lim = 1.0 - sep_eps;
  if (r < -lim || r > lim) {
    if (monitor != nullptr) monitor->count.fetch_add(1, std::memory_order_relaxed);
    r = (r < -lim) ? -lim : lim;
  }
  const scalar_t up = 1.0 + r;
  const scalar_t dn = 1.0 - r;
  switch (order) {
    case 0:
      return up * std::log(up) + dn * std::log(dn);
    case 1:
      return std::log(up / dn);
    case 2:
      return 2.0 / (up * dn);
    default:
      return -1.0 / (up * up) + 1.0 / (dn * dn);
  }
}

scalar_t f2(scalar_t r, int order, scalar_t k) {
  assert(order >= 0 && order <= 3);
  switch (order) {
    case 0:
      return k * (1.0 - r * r);
    case 1:
      return -2.0 * k * r;
    case 2:
      return -2.0 * k;
    default:
      return 0.0;
  }
}

scalar_t proliferation(const ModelParams& mp, scalar_t r, int order) {
  assert(order >= 0 && order <= 2);
  if (mp.p_kind == ProliferationKind::Constant) {
    return order == 0 ? mp.p0 : 0.0;
  }
  const scalar_t a = r / mp.p_s;
  const scalar_t th = std::tanh(a);
  const scalar_t sech2 = 1.0 - th * th;
  switch (order) {
    case 0:
      return 0.5 * mp.p0 * (1.0 + th);
    case 1:
      return 0.5 * mp.p0 * sech2 / mp.p_s;
    default:
      return -mp.p0 * sech2 * th / (mp.p_s * mp.p_s);
  }
}

scalar_t potential(const ModelParams& mp, scalar_t r, int order, ClampMonitor* monitor) {
  return f1_log(r, order, mp.sep_eps, monitor) + f2(r, order, mp.f2_k);
}

}  // namespace chsc

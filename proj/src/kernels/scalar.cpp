#include "scert/kernels.hpp"

#include "kernels/scalar_impl.hpp"

namespace scert::kernels {

const KernelTable& scalar_table() {
  static const KernelTable table{
      "scalar",
      &scalar::dense,
      &scalar::relu,
      &scalar::leaky_relu,
      &scalar::affine_levels,
      &scalar::distances_l1,
      &scalar::distances_l2,
      &scalar::distances_linf,
      &scalar::distances_mapped_l2,
  };
  return table;
}

}  // namespace scert::kernels

#pragma once

#include <iosfwd>

#include "skorohod/process.hpp"

namespace skorohod {

// Line-oriented text forms. Cells are 1-based, values printed with 17 digits, and
// only nonzero entries are written.
//
//   order 2 cells 8
//   entries 1
//   1,3=0.5
//
//   functional orders 2 cells 8
//   mean=0
//   order 1 cells 8 ...
//
//   process cells 8 orders 2
//   time_cell 1 levels 1
//   functional ...
void write_kernel(std::ostream& out, const SymKernel& f);
SymKernel read_kernel(std::istream& in);

void write_functional(std::ostream& out, const ChaosFunctional& F);
ChaosFunctional read_functional(std::istream& in);

void write_process(std::ostream& out, const ChaosProcess& u);
ChaosProcess read_process(std::istream& in);

}  // namespace skorohod

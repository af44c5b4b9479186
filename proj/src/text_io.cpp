#include "skorohod/text_io.hpp"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "skorohod/error.hpp"

namespace skorohod {

namespace {

std::string next_line(std::istream& in) {
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') return line;
  throw ContractViolation("unexpected end of input");
}

// "word1 v1 word2 v2" with fixed words.
std::pair<long, long> header(std::istream& in, const char* first, const char* second,
                             const char* third) {
  std::istringstream s(next_line(in));
  std::string a, b, c;
  long x = 0, y = 0;
  if (third) {
    s >> a >> b >> x >> c >> y;
  } else {
    s >> a >> x >> b >> y;
  }
  const bool ok = third ? (a == first && b == second && c == third) : (a == first && b == second);
  if (!s || !ok) throw ContractViolation(std::string("malformed header, expected ") + first);
  return {x, y};
}

}  // namespace

void write_kernel(std::ostream& out, const SymKernel& f) {
  out << "order " << f.order() << " cells " << f.grid().n_cells() << "\n";
  std::size_t nonzero = 0;
  for (std::size_t i = 0; i < f.size(); ++i) nonzero += f[i] != 0.0;
  out << "entries " << nonzero << "\n";
  char buf[40];
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0.0) continue;
    auto cells = f.cells(i);
    for (std::size_t j = 0; j < cells.size(); ++j) out << (j ? "," : "") << int(cells[j]);
    std::snprintf(buf, sizeof buf, "%.17g", f[i]);
    out << "=" << buf << "\n";
  }
}

SymKernel read_kernel(std::istream& in) {
  auto [order, cells] = header(in, "order", "cells", nullptr);
  if (cells < 1 || cells > kMaxCells || order < 1 || order > kMaxOrder)
    throw ContractViolation("kernel header out of range");
  const Grid grid(static_cast<int>(cells));
  SymKernel f(grid, static_cast<int>(order));
  std::istringstream count_line(next_line(in));
  std::string word;
  long entries = -1;
  count_line >> word >> entries;
  if (word != "entries" || entries < 0) throw ContractViolation("malformed entry count");
  Eigen::VectorXd values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(f.size()));
  for (long e = 0; e < entries; ++e) {
    const std::string line = next_line(in);
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ContractViolation("kernel entry needs '='");
    std::vector<int> idx;
    std::istringstream cs(line.substr(0, eq));
    std::string tok;
    while (std::getline(cs, tok, ',')) idx.push_back(std::stoi(tok));
    if (static_cast<long>(idx.size()) != order) throw ContractViolation("kernel entry has wrong arity");
    for (int c : idx)
      if (c < 1 || c > cells) throw ContractViolation("kernel cell out of range");
    std::sort(idx.begin(), idx.end());
    values[static_cast<Eigen::Index>(f.table().rank(std::span<const int>(idx)))] =
        std::stod(line.substr(eq + 1));
  }
  return SymKernel(grid, static_cast<int>(order), std::move(values));
}

void write_functional(std::ostream& out, const ChaosFunctional& F) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", F.mean());
  out << "functional orders " << F.max_order() << " cells " << F.grid().n_cells() << "\n";
  out << "mean=" << buf << "\n";
  for (const auto& f : F.kernels()) write_kernel(out, f);
}

ChaosFunctional read_functional(std::istream& in) {
  auto [orders, cells] = header(in, "functional", "orders", "cells");
  if (cells < 1 || cells > kMaxCells || orders < 0 || orders > kMaxOrder)
    throw ContractViolation("functional header out of range");
  const std::string mean_line = next_line(in);
  if (mean_line.rfind("mean=", 0) != 0) throw ContractViolation("functional needs mean=");
  const double mean = std::stod(mean_line.substr(5));
  std::vector<SymKernel> kernels;
  for (long n = 1; n <= orders; ++n) {
    SymKernel f = read_kernel(in);
    if (f.order() != n || f.grid().n_cells() != cells)
      throw ContractViolation("functional kernel does not match header");
    kernels.push_back(std::move(f));
  }
  return ChaosFunctional(Grid(static_cast<int>(cells)), mean, std::move(kernels));
}

void write_process(std::ostream& out, const ChaosProcess& u) {
  const int N = u.grid().n_cells();
  out << "process cells " << N << " orders " << u.max_order() << "\n";
  for (int a = 1; a <= N; ++a) {
    out << "time_cell " << a << " levels " << u.levels(a) << "\n";
    for (int r = 0; r < u.levels(a); ++r) write_functional(out, u.at(a, r));
  }
}

ChaosProcess read_process(std::istream& in) {
  auto [cells, orders] = header(in, "process", "cells", "orders");
  if (cells < 1 || cells > kMaxCells || orders < 0 || orders > kMaxOrder)
    throw ContractViolation("process header out of range");
  const Grid grid(static_cast<int>(cells));
  std::vector<std::vector<ChaosFunctional>> levels;
  for (long a = 1; a <= cells; ++a) {
    auto [index, count] = header(in, "time_cell", "levels", nullptr);
    if (index != a || count < 1 || count > kMaxOrder + 1)
      throw ContractViolation("time cells must be listed in order");
    std::vector<ChaosFunctional> row;
    for (long r = 0; r < count; ++r) {
      ChaosFunctional F = read_functional(in);
      require_same_grid(grid, F.grid());
      row.push_back(std::move(F));
    }
    levels.push_back(std::move(row));
  }
  return ChaosProcess(grid, std::move(levels));
}

}  // namespace skorohod

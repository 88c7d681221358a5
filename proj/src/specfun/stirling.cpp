#include "kqpd/specfun.hpp"

namespace kqpd {

Stirling3Table& Stirling3Table::global() {
  static Stirling3Table table;
  return table;
}

void Stirling3Table::grow(int n) {
  while (static_cast<int>(rows_.size()) <= n) {
    const int m = static_cast<int>(rows_.size());
    std::vector<BigInt> row(m / 3 + 1);
    if (m == 0) {
      row[0] = 1;
    } else {
      // S(m, k) = k S(m-1, k) + C(m-1, 2) S(m-3, k-1)
      const long long c2 = static_cast<long long>(m - 1) * (m - 2) / 2;
      for (int k = 1; k <= m / 3; ++k) {
        BigInt v = 0;
        if (k <= (m - 1) / 3) v += BigInt(k) * rows_[m - 1][k];
        if (m >= 3 && k - 1 <= (m - 3) / 3) v += BigInt(c2) * rows_[m - 3][k - 1];
        row[k] = v;
      }
    }
    rows_.push_back(std::move(row));
  }
}

BigInt Stirling3Table::get(int n, int k) {
  if (n < 0 || k < 0 || 3 * k > n) return 0;
  std::lock_guard<std::mutex> lock(mu_);
  grow(n);
  return rows_[n][k];
}

double Stirling3Table::get_double(int n, int k) { return get(n, k).convert_to<double>(); }

int Stirling3Table::max_n() const {
  std::lock_guard<std::mutex> lock(mu_);
  return static_cast<int>(rows_.size()) - 1;
}

BigInt stirling3(int n, int k) { return Stirling3Table::global().get(n, k); }

}  // namespace kqpd

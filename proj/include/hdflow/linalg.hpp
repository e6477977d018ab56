/*
   Copyright 2026 The hdflow Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <cstddef>
#include <vector>

#include "hdflow/field.hpp"

namespace hdflow {

using Matrix = std::vector<std::vector<Coeff>>;

/// Basis of {v : A v = 0} over the field, from reduced row echelon form. Free columns are taken
/// in increasing order, so the basis is deterministic.
inline std::vector<std::vector<Coeff>> nullspace(const Field& F, Matrix A, std::size_t ncols) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < ncols && row < A.size(); ++col) {
        std::size_t pr = row;
        while (pr < A.size() && A[pr][col] == 0) ++pr;
        if (pr == A.size()) continue;
        std::swap(A[row], A[pr]);
        const Coeff inv = F.inv(A[row][col]);
        for (auto& v : A[row]) v = F.mul(v, inv);
        for (std::size_t r = 0; r < A.size(); ++r) {
            if (r == row || A[r][col] == 0) continue;
            const Coeff fct = A[r][col];
            for (std::size_t c = col; c < ncols; ++c)
                if (A[row][c]) A[r][c] = F.sub(A[r][c], F.mul(fct, A[row][c]));
        }
        pivots.push_back(col);
        ++row;
    }
    std::vector<bool> is_pivot(ncols, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<std::vector<Coeff>> basis;
    for (std::size_t fc = 0; fc < ncols; ++fc) {
        if (is_pivot[fc]) continue;
        std::vector<Coeff> v(ncols, 0);
        v[fc] = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = F.neg(A[i][fc]);
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace hdflow

// Copyright 2026 The femda Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Fit every classifier on one simulated mixture and print test accuracy.

#include "femda/femda.hpp"

#include <cstdio>
#include <string>

int main()
{
  femda::SyntheticConfig sc;
  sc.seed = 1;
  const auto mix = femda::generate_mixture(sc);
  const femda::Dataset ds{"synthetic", mix.data, mix.labels, sc.k, {}};
  const auto parts = femda::split(ds, 0.7, 1);

  for (const auto method : femda::all_methods) {
    const auto clf = femda::fit(method, parts.train.data, parts.train.labels);
    const double acc = femda::accuracy(femda::predict(clf, parts.test.data), parts.test.labels);
    std::printf("%-6s %.4f\n", std::string(femda::method_name(method)).c_str(), acc);
  }
  return 0;
}

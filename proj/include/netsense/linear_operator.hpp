// SPDX-License-Identifier: Apache-2.0
//
// netsense - networked device-free sensing simulator
// Copyright (C) 2026 The netsense authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "netsense/common.hpp"

namespace netsense
{
    /// A complex linear map A together with its adjoint A^H.
    class LinearOperator
    {
    public:
        virtual ~LinearOperator() = default;

        virtual Eigen::Index rows() const = 0;
        virtual Eigen::Index cols() const = 0;
        virtual Eigen::VectorXcd apply(const Eigen::VectorXcd &x) const = 0;
        virtual Eigen::VectorXcd adjoint(const Eigen::VectorXcd &y) const = 0;
    };

    class DenseOperator final : public LinearOperator
    {
    public:
        explicit DenseOperator(Eigen::MatrixXcd matrix) : matrix_(std::move(matrix)) {}

        Eigen::Index rows() const override { return matrix_.rows(); }
        Eigen::Index cols() const override { return matrix_.cols(); }
        Eigen::VectorXcd apply(const Eigen::VectorXcd &x) const override { return matrix_ * x; }
        Eigen::VectorXcd adjoint(const Eigen::VectorXcd &y) const override { return matrix_.adjoint() * y; }

        const Eigen::MatrixXcd &matrix() const { return matrix_; }

    private:
        Eigen::MatrixXcd matrix_;
    };
}

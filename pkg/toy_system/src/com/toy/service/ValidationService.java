package com.toy.service;

import com.toy.data.Order;

public class ValidationService implements Service {
    public boolean check(Order order) {
        return order != null;
    }
}

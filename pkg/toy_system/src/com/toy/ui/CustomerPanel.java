package com.toy.ui;

import com.toy.service.*;

public class CustomerPanel extends BaseView {
    private CustomerService customers;

    public String heading() {
        return "Customer"; /* CustomerRepository is not used here */
    }
}

package com.toy.data;

public class Customer extends Entity {
    private String name;
}
